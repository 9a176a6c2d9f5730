#include "jjsim/characteristic.hpp"

#include <cmath>
#include <stdexcept>

#include "jjsim/cubic.hpp"

namespace jjsim {

double i_of_v(double alpha, double v) { return v * (1.0 + 4.0 * alpha / (1.0 + v * v)); }

double i_of_v_derivative(double alpha, double v) {
    const double w = 1.0 + v * v;
    return 1.0 + 4.0 * alpha * (1.0 - v * v) / (w * w);
}

double characteristic_dimensional(const PhysicalParams& p, double V, const PhysicalConstants& k) {
    validate(p);
    const double omega = 2.0 * k.e * V / k.hbar;
    const double lorentz = std::norm(p.K) / (omega * omega + p.gamma * p.gamma);
    return V / p.R * (1.0 + 4.0 * lorentz);
}

CharacteristicExtrema extrema(double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("extrema: alpha must be >= 0");
    CharacteristicExtrema out;
    if (alpha < 2.0) {
        out.i_c = std::sqrt(3.0) * (1.0 + alpha);
        return out;
    }
    const double s = std::sqrt(alpha * (alpha - 2.0));
    const double vm = std::sqrt(2.0 * alpha - 1.0 - 2.0 * s);
    const double vp = std::sqrt(2.0 * alpha - 1.0 + 2.0 * s);
    out.v_minus = vm;
    out.v_plus = vp;
    out.i_c = i_of_v(alpha, vm);
    out.i_r = i_of_v(alpha, vp);
    return out;
}

double stewart_mccumber(const PhysicalParams& p, const PhysicalConstants& k) {
    return extrema(nondimensionalize(p, k).params.alpha).i_c;
}

double squid_effective_alpha(double K_A, double K_B, double Phi, double gamma,
                             const PhysicalConstants& k) {
    if (K_A < 0.0 || K_B < 0.0)
        throw std::invalid_argument("squid_effective_alpha: junction rates must be >= 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("squid_effective_alpha: gamma must be > 0");
    const double k_sq =
        K_A * K_A + K_B * K_B + 2.0 * K_A * K_B * std::cos(2.0 * k.e * Phi / k.hbar);
    return k_sq / (gamma * gamma);
}

std::vector<FixedPoint> fixed_points(double alpha, double i_tot) {
    if (alpha < 0.0) throw std::invalid_argument("fixed_points: alpha must be >= 0");
    // Stationary voltages solve v^3 - i v^2 + (1 + 4 alpha) v - i = 0.
    const CubicRoots roots = solve_cubic(-i_tot, 1.0 + 4.0 * alpha, -i_tot);
    std::vector<FixedPoint> out;
    out.reserve(static_cast<std::size_t>(roots.count));
    for (int n = 0; n < roots.count; ++n) {
        FixedPoint fp;
        fp.v0 = roots.root[static_cast<std::size_t>(n)];
        const double w = 1.0 + fp.v0 * fp.v0;
        fp.i_j0 = 4.0 * alpha * fp.v0 / w;
        fp.i_s0 = 4.0 * alpha * fp.v0 * fp.v0 / w;
        // zeta0 = 4 alpha / (1 - i/v0), continuously 0 at v0 = 0.
        fp.zeta0 = std::complex<double>(fp.i_s0, fp.i_j0);
        out.push_back(fp);
    }
    return out;
}

}  // namespace jjsim
