#pragma once

#include <complex>

#include "jjsim/constants.hpp"
#include "jjsim/integrate.hpp"
#include "jjsim/model.hpp"

namespace jjsim {

/// Collective two-level emitter ensemble: population imbalance n_diff,
/// collective coherence z, conserved total n_total.
struct CollectiveState {
    double n_diff = 0.0;
    std::complex<double> z{0.0, 0.0};
    double n_total = 0.0;

    [[nodiscard]] double n1() const { return 0.5 * (n_total + n_diff); }
    [[nodiscard]] double n2() const { return 0.5 * (n_total - n_diff); }
};

/// Pure state with a small tip away from full inversion, which is an exact
/// (unstable) equilibrium: n1 = N (1 - tip_fraction), z = sqrt(n1 n2).
[[nodiscard]] CollectiveState dicke_pure_state(double N, double tip_fraction = 1e-2);

/// Collective decay equations: the ensemble de-excites at a rate set by
/// |z|^2 while the coherence is amplified by the remaining inversion.
[[nodiscard]] CollectiveState rhs_dicke(double omega_A, double gamma_e,
                                        const CollectiveState& s);

/// Radiated power hbar omega_A gamma_e |z|^2 [W].
[[nodiscard]] double dicke_power(double gamma_e, double omega_A, std::complex<double> z,
                                 const PhysicalConstants& k = codata());

/// Integrates the collective decay; trajectory components (n_diff, Re z, Im z).
[[nodiscard]] Trajectory<3> integrate_dicke(double omega_A, double gamma_e,
                                            const CollectiveState& s0, double t0, double t1,
                                            const IntegratorConfig& cfg);

/// Junction voltage and coherence with radiative emission fed back as an
/// extra drain on both. Requires real tunneling rate K.
struct EmitterCircuitState {
    double V = 0.0;
    std::complex<double> z{0.0, 0.0};
};

[[nodiscard]] EmitterCircuitState rhs_superradiant_jj(const PhysicalParams& p, double gamma_e,
                                                      const EmitterCircuitState& s,
                                                      const PhysicalConstants& k = codata());

/// Integrates the radiating junction; trajectory components (V, Re z, Im z).
[[nodiscard]] Trajectory<3> integrate_superradiant_jj(const PhysicalParams& p, double gamma_e,
                                                      const EmitterCircuitState& s0, double t0,
                                                      double t1, const IntegratorConfig& cfg,
                                                      const PhysicalConstants& k = codata());

/// Oscillation frequency set by a dc voltage: 2 e V / hbar [rad/s].
[[nodiscard]] double josephson_frequency(double V, const PhysicalConstants& k = codata());

/// Effective dipole moment of a junction of electrode separation ell [C m].
[[nodiscard]] double dipole_moment(double ell, const PhysicalConstants& k = codata());

/// Free-space spontaneous emission rate of a dipole d at frequency omega_A.
[[nodiscard]] double spontaneous_rate(double d, double omega_A,
                                      const PhysicalConstants& k = codata());

/// Emission wavelength 2 pi c / omega_A [m].
[[nodiscard]] double emission_wavelength(double omega_A, const PhysicalConstants& k = codata());

/// Cavity-enhanced emission rate for quality factor Q and cavity size L.
[[nodiscard]] double purcell_rate(double gamma_e, double Q, double lambda_A, double L);

/// Fraction of the bias power leaving as free-space radiation when the
/// junction runs at voltage V with switching current I_c.
[[nodiscard]] double efficiency_open_space(const PhysicalParams& p, double V, double ell,
                                           double I_c, const PhysicalConstants& k = codata());

/// Radiative efficiency inside a cavity: one tenth of Q times the free-space
/// value (half-wavelength cavity).
[[nodiscard]] double efficiency_cavity(double eta_rad, double Q);

/// Exact stationary coherence of the radiating junction at clamped voltage V.
[[nodiscard]] std::complex<double> stationary_coherence(const PhysicalParams& p, double gamma_e,
                                                        double V,
                                                        const PhysicalConstants& k = codata());

/// Weak-damping limit of |stationary_coherence|^2; independent of V.
[[nodiscard]] double weak_damping_coherence_sq(double K, double C,
                                               const PhysicalConstants& k = codata());

}  // namespace jjsim
