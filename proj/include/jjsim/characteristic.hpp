#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "jjsim/constants.hpp"
#include "jjsim/model.hpp"

namespace jjsim {

/// Stationary current-voltage characteristic i(v) = v (1 + 4 alpha / (1 + v^2)).
[[nodiscard]] double i_of_v(double alpha, double v);

/// d i/d v of the characteristic.
[[nodiscard]] double i_of_v_derivative(double alpha, double v);

/// Same curve in SI units: bias current through the device at dc voltage V.
[[nodiscard]] double characteristic_dimensional(const PhysicalParams& p, double V,
                                                const PhysicalConstants& k = codata());

/// Local extrema of the characteristic. For alpha >= 2 the curve folds:
/// v_minus/v_plus bracket the negative-slope segment, i_c is the maximum
/// (switching) current and i_r the minimum (retrapping) current. For
/// alpha < 2 the curve is monotone; i_c degrades to the inflection value
/// sqrt(3) (1 + alpha) and the fold data are absent. At alpha = 2 exactly the
/// fold degenerates: v_minus = v_plus = sqrt(3) and i_c = i_r = 3 sqrt(3).
struct CharacteristicExtrema {
    double i_c = 0.0;
    std::optional<double> v_minus{};
    std::optional<double> v_plus{};
    std::optional<double> i_r{};
};

[[nodiscard]] CharacteristicExtrema extrema(double alpha);

/// Hysteresis parameter of the equivalent shunted-junction model; equals the
/// dimensionless switching current of the same device.
[[nodiscard]] double stewart_mccumber(const PhysicalParams& p,
                                      const PhysicalConstants& k = codata());

/// Effective alpha of a two-junction loop threaded by flux Phi [Wb]:
/// |K|^2 = K_A^2 + K_B^2 + 2 K_A K_B cos(2 e Phi / hbar), divided by gamma^2.
/// Periodic in Phi with period pi hbar / e.
[[nodiscard]] double squid_effective_alpha(double K_A, double K_B, double Phi, double gamma,
                                           const PhysicalConstants& k = codata());

/// A stationary point of the circuit equations at bias i_tot: voltage v0 and
/// the stationary coherence zeta0 = i_s0 + i i_j0.
struct FixedPoint {
    double v0 = 0.0;
    std::complex<double> zeta0{0.0, 0.0};
    double i_j0 = 0.0;
    double i_s0 = 0.0;

    [[nodiscard]] CircuitState state() const { return {v0, i_j0, i_s0}; }
};

/// All real stationary voltages at the given bias, ascending in v0. One point
/// outside the fold window, three inside (a double root is repeated).
[[nodiscard]] std::vector<FixedPoint> fixed_points(double alpha, double i_tot);

}  // namespace jjsim
