#include "jjsim/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jjsim {

namespace {
constexpr double k_gamma_rc_tol = 1e-9;
}

void validate(const PhysicalParams& p) {
    if (!(p.R > 0.0)) throw std::invalid_argument("PhysicalParams: R must be > 0");
    if (!(p.C > 0.0)) throw std::invalid_argument("PhysicalParams: C must be > 0");
    if (!(p.gamma > 0.0)) throw std::invalid_argument("PhysicalParams: gamma must be > 0");
    const double grc = p.gamma * p.R * p.C;
    if (std::abs(grc - 1.0) > k_gamma_rc_tol)
        throw std::invalid_argument("PhysicalParams: gamma must equal 1/(R*C), got gamma*R*C = " +
                                    std::to_string(grc));
}

PhysicalParams make_physical_params(double R, double C, std::complex<double> K, double I) {
    if (!(R > 0.0)) throw std::invalid_argument("PhysicalParams: R must be > 0");
    if (!(C > 0.0)) throw std::invalid_argument("PhysicalParams: C must be > 0");
    return PhysicalParams{R, C, K, 1.0 / (R * C), I};
}

Nondimensional nondimensionalize(const PhysicalParams& p, const PhysicalConstants& k) {
    validate(p);
    Scales sc;
    sc.voltage = k.hbar / (2.0 * k.e * p.R * p.C);
    sc.current = sc.voltage / p.R;
    sc.time = 1.0 / p.gamma;

    DimensionlessParams dp;
    dp.alpha = std::norm(p.K) / (p.gamma * p.gamma);
    dp.i_tot = p.I / sc.current;
    return {dp, sc};
}

CircuitState rhs_autonomous(const DimensionlessParams& p, const CircuitState& s) {
    CircuitState d;
    d.v = p.i_tot - s.v - s.i_j;
    d.i_j = -s.i_j - (s.i_s - 4.0 * p.alpha) * s.v;
    d.i_s = -s.i_s + s.i_j * s.v;
    return d;
}

CircuitState rhs_driven(const DimensionlessParams& p, const CircuitState& s, double tau) {
    if (!p.drive || p.drive->v_f == 0.0) return rhs_autonomous(p, s);
    const double w = s.v + p.drive->v_f * std::cos(p.drive->omega_f * tau);
    CircuitState d;
    d.v = p.i_tot - s.v - s.i_j;
    d.i_j = -s.i_j - s.i_s * w + 4.0 * p.alpha * s.v;
    d.i_s = -s.i_s + s.i_j * w;
    return d;
}

ElectrodeState rhs_electrodes(const PhysicalParams& p, const ElectrodeState& s, double nbar1,
                              double nbar2, const PhysicalConstants& k) {
    validate(p);
    if (s.n1 < 0.0 || s.n2 < 0.0)
        throw std::invalid_argument("rhs_electrodes: populations must be non-negative");

    // Tunneling exchanges pairs between the electrodes through the coherence;
    // the reservoirs relax each occupation toward its pumped value.
    const double exchange = 2.0 * std::imag(std::conj(p.K) * s.z);
    ElectrodeState d;
    d.n1 = -p.gamma * (s.n1 - nbar1) + exchange;
    d.n2 = -p.gamma * (s.n2 - nbar2) - exchange;

    const double u_over_hbar = 2.0 * k.e * k.e * s.n_diff() / (p.C * k.hbar);
    d.z = (std::complex<double>(0.0, u_over_hbar) - p.gamma) * s.z -
          std::complex<double>(0.0, 1.0) * p.K * s.n_diff();
    return d;
}

double external_current_from_rates(double gamma_up_1, double gamma_up_2,
                                   const PhysicalConstants& k) {
    return -k.e * (gamma_up_1 - gamma_up_2);
}

double total_number_relaxation(double N0, double Nbar, double gamma, double t) {
    return Nbar + (N0 - Nbar) * std::exp(-gamma * t);
}

namespace {
double real_tunneling_rate(const PhysicalParams& p) {
    if (p.K.imag() != 0.0)
        throw std::invalid_argument("circuit/electrode mapping requires a real tunneling rate");
    if (p.K.real() == 0.0)
        throw std::invalid_argument("circuit/electrode mapping requires a nonzero tunneling rate");
    return p.K.real();
}
}  // namespace

CircuitState circuit_from_electrodes(const ElectrodeState& s, const PhysicalParams& p,
                                     const Scales& sc, const PhysicalConstants& k) {
    const double K = real_tunneling_rate(p);
    CircuitState c;
    c.v = -k.e * s.n_diff() / (p.C * sc.voltage);
    c.i_s = 4.0 * k.e * K * s.z.real() / sc.current;
    c.i_j = 4.0 * k.e * K * s.z.imag() / sc.current;
    return c;
}

ElectrodeState electrodes_from_circuit(const CircuitState& s, const PhysicalParams& p,
                                       const Scales& sc, double n_total,
                                       const PhysicalConstants& k) {
    const double K = real_tunneling_rate(p);
    const double n = -s.v * p.C * sc.voltage / k.e;
    ElectrodeState e;
    e.n1 = 0.5 * (n_total + n);
    e.n2 = 0.5 * (n_total - n);
    if (e.n1 < 0.0 || e.n2 < 0.0)
        throw std::invalid_argument(
            "electrodes_from_circuit: n_total too small for the requested voltage");
    e.z = std::complex<double>(s.i_s, s.i_j) * sc.current / (4.0 * k.e * K);
    return e;
}

}  // namespace jjsim
