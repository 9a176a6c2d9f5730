#pragma once

#include <array>
#include <cstddef>

namespace jjsim {

/// Real roots of x^3 + b x^2 + c x + d, ascending. A double root is reported
/// twice (count 3 with two equal entries) rather than perturbed; the
/// discriminant decides the branch with a scale-relative 1e-12 margin.
struct CubicRoots {
    std::array<double, 3> root{};
    int count = 0;
};

[[nodiscard]] CubicRoots solve_cubic(double b, double c, double d);

/// All roots of a monic real cubic: one guaranteed real root plus either two
/// more real roots or a complex-conjugate pair (re +/- i*im, im >= 0).
struct CubicSpectrum {
    double real_root = 0.0;
    bool pair_is_complex = false;
    double pair_re = 0.0;
    double pair_im = 0.0;  // >= 0; for a real pair the two roots are pair_re +/- pair_im
};

[[nodiscard]] CubicSpectrum solve_cubic_full(double b, double c, double d);

}  // namespace jjsim
