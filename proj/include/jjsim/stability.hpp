#pragma once

#include <array>

namespace jjsim {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Jacobian of the autonomous circuit equations evaluated at the stationary
/// point with voltage v0 (coherence components taken on the characteristic).
[[nodiscard]] Mat3 jacobian(double alpha, double v0);

/// Coefficients of det(lambda I - J) = lambda^3 + c2 lambda^2 + c1 lambda + c0.
struct CharPoly {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
};

[[nodiscard]] CharPoly char_poly(double alpha, double v0);

/// Eigenvalue summary of a stationary point. The spectrum is one real
/// eigenvalue lambda0 plus a pair kappa +/- i eta (eta >= 0); for alpha >= 0
/// the pair is complex-conjugate except at the triple root alpha = v0 = 0.
/// slope is the characteristic slope di/dv at v0; the point is unstable
/// exactly when that slope is negative.
struct StabilityReport {
    double v0 = 0.0;
    double lambda0 = 0.0;
    double kappa = 0.0;
    double eta = 0.0;
    double slope = 0.0;
    bool unstable = false;
};

[[nodiscard]] StabilityReport eigenvalues(double alpha, double v0);

/// Routh-Hurwitz verdict from the constant coefficient alone: unstable
/// exactly when c0 < 0. Marginal points (c0 == 0) count as not unstable.
[[nodiscard]] bool is_unstable(double alpha, double v0);

}  // namespace jjsim
