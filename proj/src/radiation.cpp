#include "jjsim/radiation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jjsim {

namespace {

double require_real_tunneling(const PhysicalParams& p) {
    if (p.K.imag() != 0.0)
        throw std::invalid_argument("radiating junction: tunneling rate must be real");
    return p.K.real();
}

}  // namespace

CollectiveState dicke_pure_state(double N, double tip_fraction) {
    if (!(N > 0.0)) throw std::invalid_argument("dicke_pure_state: N must be > 0");
    if (!(tip_fraction > 0.0) || !(tip_fraction < 1.0))
        throw std::invalid_argument("dicke_pure_state: tip_fraction must be in (0, 1)");
    CollectiveState s;
    s.n_total = N;
    s.n_diff = N * (1.0 - 2.0 * tip_fraction);
    s.z = std::sqrt(s.n1() * s.n2());
    return s;
}

CollectiveState rhs_dicke(double omega_A, double gamma_e, const CollectiveState& s) {
    CollectiveState d;
    d.n_diff = -2.0 * gamma_e * std::norm(s.z);
    d.z = std::complex<double>(0.0, -omega_A) * s.z + 0.5 * gamma_e * s.n_diff * s.z;
    d.n_total = 0.0;
    return d;
}

double dicke_power(double gamma_e, double omega_A, std::complex<double> z,
                   const PhysicalConstants& k) {
    return k.hbar * omega_A * gamma_e * std::norm(z);
}

Trajectory<3> integrate_dicke(double omega_A, double gamma_e, const CollectiveState& s0,
                              double t0, double t1, const IntegratorConfig& cfg) {
    auto rhs = [omega_A, gamma_e, N = s0.n_total](double, const std::array<double, 3>& y,
                                                  std::array<double, 3>& dy) {
        const CollectiveState d =
            rhs_dicke(omega_A, gamma_e, {y[0], {y[1], y[2]}, N});
        dy = {d.n_diff, d.z.real(), d.z.imag()};
    };
    return integrate<3>(rhs, {s0.n_diff, s0.z.real(), s0.z.imag()}, t0, t1, cfg);
}

EmitterCircuitState rhs_superradiant_jj(const PhysicalParams& p, double gamma_e,
                                        const EmitterCircuitState& s,
                                        const PhysicalConstants& k) {
    validate(p);
    const double K = require_real_tunneling(p);
    EmitterCircuitState d;
    d.V = -p.gamma * s.V - 4.0 * K * k.e / p.C * s.z.imag() +
          (p.I - 2.0 * k.e * gamma_e * std::norm(s.z)) / p.C;
    const double decay = p.gamma + 0.5 * gamma_e * p.C * s.V / k.e;
    d.z = -(decay + std::complex<double>(0.0, josephson_frequency(s.V, k))) * s.z +
          std::complex<double>(0.0, K * p.C / k.e) * s.V;
    return d;
}

Trajectory<3> integrate_superradiant_jj(const PhysicalParams& p, double gamma_e,
                                        const EmitterCircuitState& s0, double t0, double t1,
                                        const IntegratorConfig& cfg, const PhysicalConstants& k) {
    validate(p);
    require_real_tunneling(p);
    auto rhs = [&p, gamma_e, &k](double, const std::array<double, 3>& y,
                                 std::array<double, 3>& dy) {
        const EmitterCircuitState d = rhs_superradiant_jj(p, gamma_e, {y[0], {y[1], y[2]}}, k);
        dy = {d.V, d.z.real(), d.z.imag()};
    };
    return integrate<3>(rhs, {s0.V, s0.z.real(), s0.z.imag()}, t0, t1, cfg);
}

double josephson_frequency(double V, const PhysicalConstants& k) {
    return 2.0 * k.e * V / k.hbar;
}

double dipole_moment(double ell, const PhysicalConstants& k) { return 2.0 * k.e * ell; }

double spontaneous_rate(double d, double omega_A, const PhysicalConstants& k) {
    return 4.0 * std::numbers::pi * k.mu0 / (3.0 * k.hbar * k.c) * d * d * omega_A * omega_A *
           omega_A;
}

double emission_wavelength(double omega_A, const PhysicalConstants& k) {
    if (!(omega_A > 0.0)) throw std::invalid_argument("emission_wavelength: omega_A must be > 0");
    return 2.0 * std::numbers::pi * k.c / omega_A;
}

double purcell_rate(double gamma_e, double Q, double lambda_A, double L) {
    if (!(L > 0.0)) throw std::invalid_argument("purcell_rate: cavity size must be > 0");
    if (Q < 0.0) throw std::invalid_argument("purcell_rate: Q must be >= 0");
    const double ratio = lambda_A / L;
    return gamma_e * 3.0 * Q / (4.0 * std::numbers::pi * std::numbers::pi) * ratio * ratio *
           ratio;
}

double efficiency_open_space(const PhysicalParams& p, double V, double ell, double I_c,
                             const PhysicalConstants& k) {
    validate(p);
    if (!(p.I > 0.0)) throw std::invalid_argument("efficiency_open_space: bias current must be > 0");
    const double prefactor =
        32.0 * std::numbers::pi * k.mu0 * k.e * k.e * k.e / (3.0 * k.hbar * k.hbar * k.hbar * k.c);
    return (I_c / p.I) * prefactor * p.C * V * V * V * ell * ell;
}

double efficiency_cavity(double eta_rad, double Q) {
    if (!(Q > 0.0)) throw std::invalid_argument("efficiency_cavity: Q must be > 0");
    return 0.1 * eta_rad * Q;
}

std::complex<double> stationary_coherence(const PhysicalParams& p, double gamma_e, double V,
                                          const PhysicalConstants& k) {
    validate(p);
    const double K = require_real_tunneling(p);
    const std::complex<double> drive(0.0, K * p.C / k.e * V);
    const std::complex<double> pole(p.gamma + 0.5 * gamma_e * p.C * V / k.e,
                                    josephson_frequency(V, k));
    return drive / pole;
}

double weak_damping_coherence_sq(double K, double C, const PhysicalConstants& k) {
    // |z0| = drive / |pole| with the pole dominated by the junction frequency:
    // (K C V / e) / (2 e V / hbar). The voltage cancels.
    const double z0 = k.hbar * K * C / (2.0 * k.e * k.e);
    return z0 * z0;
}

}  // namespace jjsim
