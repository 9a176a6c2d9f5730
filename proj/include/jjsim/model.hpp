#pragma once

#include <complex>
#include <optional>

#include "jjsim/constants.hpp"

namespace jjsim {

/// Harmonic bias drive added on top of the dc bias current.
struct Drive {
    double v_f = 0.0;      // drive amplitude, in units of the voltage scale
    double omega_f = 0.0;  // drive angular frequency, in units of the relaxation rate
};

/// Parameters of the reduced circuit equations. alpha compares pair tunneling
/// to quasiparticle relaxation; i_tot is the dc bias in characteristic units.
struct DimensionlessParams {
    double alpha = 0.0;
    double i_tot = 0.0;
    std::optional<Drive> drive{};
};

/// Raw device parameters in SI units. gamma must equal 1/(R*C); use
/// make_physical_params to get that by construction.
struct PhysicalParams {
    double R = 0.0;                    // shunt resistance [ohm]
    double C = 0.0;                    // junction capacitance [F]
    std::complex<double> K{0.0, 0.0};  // pair tunneling rate [1/s]
    double gamma = 0.0;                // quasiparticle relaxation rate [1/s]
    double I = 0.0;                    // external bias current [A]
};

/// Conversion factors between SI quantities and their dimensionless versions.
struct Scales {
    double voltage = 0.0;  // [V]
    double current = 0.0;  // [A]
    double time = 0.0;     // [s]
};

/// Instantaneous circuit state: junction voltage and the two components of
/// the pair current (dissipative i_j, reactive i_s), all dimensionless.
struct CircuitState {
    double v = 0.0;
    double i_j = 0.0;
    double i_s = 0.0;
};

/// Per-electrode pair occupations and the inter-electrode pair coherence.
struct ElectrodeState {
    double n1 = 0.0;
    double n2 = 0.0;
    std::complex<double> z{0.0, 0.0};

    [[nodiscard]] double n_diff() const { return n1 - n2; }
    [[nodiscard]] double n_total() const { return n1 + n2; }
    /// Electrostatic energy difference 2 e^2 (n1-n2)/C [J].
    [[nodiscard]] double energy_difference(double C, const PhysicalConstants& k = codata()) const {
        return 2.0 * k.e * k.e * n_diff() / C;
    }
};

/// Throws std::invalid_argument if any physical parameter is inconsistent
/// (non-positive R, C or gamma, or gamma not equal to 1/(R*C) within 1e-9).
void validate(const PhysicalParams& p);

/// Builds a parameter set with gamma = 1/(R*C) by construction.
[[nodiscard]] PhysicalParams make_physical_params(double R, double C, std::complex<double> K,
                                                  double I);

struct Nondimensional {
    DimensionlessParams params;
    Scales scales;
};

/// Maps SI device parameters onto the reduced parameter set and returns the
/// conversion scales alongside. Throws on invalid parameters.
[[nodiscard]] Nondimensional nondimensionalize(const PhysicalParams& p,
                                               const PhysicalConstants& k = codata());

/// Time derivative of the undriven circuit state.
[[nodiscard]] CircuitState rhs_autonomous(const DimensionlessParams& p, const CircuitState& s);

/// Time derivative with the harmonic drive applied. The drive enters only
/// through the phase-rotation products; with v_f = 0 this is exactly
/// rhs_autonomous, same code path.
[[nodiscard]] CircuitState rhs_driven(const DimensionlessParams& p, const CircuitState& s,
                                      double tau);

/// Time derivative of the electrode occupations and coherence in SI units.
/// nbar1/nbar2 are the occupations the reservoirs pump toward. Throws on
/// negative input populations.
[[nodiscard]] ElectrodeState rhs_electrodes(const PhysicalParams& p, const ElectrodeState& s,
                                            double nbar1, double nbar2,
                                            const PhysicalConstants& k = codata());

/// Net bias current sustained by the two reservoir injection rates [A].
[[nodiscard]] double external_current_from_rates(double gamma_up_1, double gamma_up_2,
                                                 const PhysicalConstants& k = codata());

/// Closed form for the total pair number: N(t) = Nbar + (N0 - Nbar) exp(-gamma t).
[[nodiscard]] double total_number_relaxation(double N0, double Nbar, double gamma, double t);

/// Projects an electrode state onto the reduced circuit coordinates.
/// Requires real K (the coherence phase convention absorbs any tunneling
/// phase); throws otherwise.
[[nodiscard]] CircuitState circuit_from_electrodes(const ElectrodeState& s,
                                                   const PhysicalParams& p, const Scales& sc,
                                                   const PhysicalConstants& k = codata());

/// Inverse of circuit_from_electrodes given a total pair number to split
/// between the electrodes. Throws if the split would drive n1 or n2 negative.
[[nodiscard]] ElectrodeState electrodes_from_circuit(const CircuitState& s,
                                                     const PhysicalParams& p, const Scales& sc,
                                                     double n_total,
                                                     const PhysicalConstants& k = codata());

}  // namespace jjsim
