#include "jjsim/cubic.hpp"

#include <algorithm>
#include <cmath>

namespace jjsim {

namespace {

double eval(double b, double c, double d, double x) { return ((x + b) * x + c) * x + d; }
double eval_deriv(double b, double c, double x) { return (3.0 * x + 2.0 * b) * x + c; }

// Newton from the closed-form estimate, run to convergence; bail out if the
// derivative is too flat to be useful.
double polish(double b, double c, double d, double x) {
    for (int it = 0; it < 60; ++it) {
        const double f = eval(b, c, d, x);
        const double df = eval_deriv(b, c, x);
        if (df == 0.0) break;
        const double step = f / df;
        if (!std::isfinite(step)) break;
        x -= step;
        if (std::abs(step) <= 4e-16 * std::abs(x)) break;
    }
    return x;
}

}  // namespace

CubicRoots solve_cubic(double b, double c, double d) {
    // Depressed form t^3 + p t + q with x = t - b/3.
    const double shift = b / 3.0;
    const double p = c - b * shift;
    const double q = d + shift * (2.0 * shift * shift - c);

    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    const double disc_scale = 4.0 * std::abs(p * p * p) + 27.0 * q * q;
    const double tol = 1e-12 * std::max(disc_scale, 1e-300);

    CubicRoots out;
    bool three_real = disc > tol;

    if (std::abs(disc) <= tol) {
        if (std::abs(p) * 1e12 <= std::max(std::abs(q), 1e-300) ||
            (p == 0.0 && q == 0.0)) {
            // p and q both vanish: triple root.
            out.root = {-shift, -shift, -shift};
            out.count = 3;
            return out;
        }
        // Double-root candidate: t = 3q/p (simple) and t = -3q/(2p) (double).
        // The discriminant is itself a cancellation-prone difference of large
        // terms, so confirm the degeneracy by residual before trusting it.
        const double simple = 3.0 * q / p - shift;
        const double doubled = -1.5 * q / p - shift;
        const double ad = std::abs(doubled);
        const double fscale =
            ((ad + std::abs(b)) * ad + std::abs(c)) * ad + std::abs(d);
        if (std::abs(eval(b, c, d, doubled)) <= 1e-6 * std::max(fscale, 1e-300)) {
            out.root = {simple, doubled, doubled};
            std::sort(out.root.begin(), out.root.end());
            out.count = 3;
            return out;
        }
        // Misclassified by rounding; three distinct real roots need p < 0.
        three_real = p < 0.0;
    }

    if (three_real) {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        constexpr double two_thirds_pi = 2.0943951023931953;
        for (int k = 0; k < 3; ++k)
            out.root[static_cast<std::size_t>(k)] = m * std::cos(theta - two_thirds_pi * k) - shift;
        out.count = 3;
    } else {
        // One real root; pick the cube root with the larger magnitude to
        // avoid cancellation, then recover the partner from p.
        const double s = std::sqrt(std::max(q * q / 4.0 + p * p * p / 27.0, 0.0));
        const double u = std::cbrt(q > 0.0 ? -q / 2.0 - s : -q / 2.0 + s);
        const double t = (u == 0.0) ? 0.0 : u - p / (3.0 * u);
        out.root[0] = t - shift;
        out.count = 1;
    }

    for (int k = 0; k < out.count; ++k)
        out.root[static_cast<std::size_t>(k)] =
            polish(b, c, d, out.root[static_cast<std::size_t>(k)]);
    std::sort(out.root.begin(), out.root.begin() + out.count);

    // With a huge spread the two inner closed-form estimates both sit at the
    // cancellation level of the -b/3 shift and can polish into the same
    // basin. The discriminant already ruled out genuine degeneracy, so a
    // collapsed pair means a root was lost; rebuild it from the root sum.
    if (out.count == 3) {
        auto collapsed = [](double x, double y) {
            return std::abs(x - y) <= 1e-7 * std::max({std::abs(x), std::abs(y), 1e-300});
        };
        for (int pass = 0; pass < 2; ++pass) {
            if (!collapsed(out.root[0], out.root[1]) && !collapsed(out.root[1], out.root[2]))
                break;
            out.root[1] = polish(b, c, d, -b - out.root[0] - out.root[2]);
            std::sort(out.root.begin(), out.root.end());
        }
    }
    return out;
}

CubicSpectrum solve_cubic_full(double b, double c, double d) {
    const CubicRoots r = solve_cubic(b, c, d);
    CubicSpectrum s;
    if (r.count == 3) {
        // All real: treat the two closest roots as the (degenerate) pair.
        const double g01 = r.root[1] - r.root[0];
        const double g12 = r.root[2] - r.root[1];
        if (g01 <= g12) {
            s.real_root = r.root[2];
            s.pair_re = 0.5 * (r.root[0] + r.root[1]);
            s.pair_im = 0.5 * g01;
        } else {
            s.real_root = r.root[0];
            s.pair_re = 0.5 * (r.root[1] + r.root[2]);
            s.pair_im = 0.5 * g12;
        }
        s.pair_is_complex = false;
        return s;
    }

    s.real_root = r.root[0];
    // Deflate by the real root; the quadratic carries the conjugate pair.
    const double q1 = b + s.real_root;
    const double q0 = c + s.real_root * q1;
    const double disc = q1 * q1 - 4.0 * q0;
    s.pair_re = -0.5 * q1;
    if (disc < 0.0) {
        s.pair_is_complex = true;
        s.pair_im = 0.5 * std::sqrt(-disc);
    } else {
        s.pair_is_complex = false;
        s.pair_im = 0.5 * std::sqrt(disc);
    }
    return s;
}

}  // namespace jjsim
