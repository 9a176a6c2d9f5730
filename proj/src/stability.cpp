#include "jjsim/stability.hpp"

#include "jjsim/cubic.hpp"

namespace jjsim {

Mat3 jacobian(double alpha, double v0) {
    const double a = 4.0 * alpha / (1.0 + v0 * v0);
    return Mat3{{{-1.0, -1.0, 0.0},  //
                 {a, -1.0, -v0},
                 {a * v0, v0, -1.0}}};
}

CharPoly char_poly(double alpha, double v0) {
    const double v2 = v0 * v0;
    const double a = 4.0 * alpha / (1.0 + v2);
    CharPoly p;
    p.c2 = 3.0;
    p.c1 = v2 + a + 3.0;
    p.c0 = v2 + a * (1.0 - v2) + 1.0;
    return p;
}

StabilityReport eigenvalues(double alpha, double v0) {
    const CharPoly p = char_poly(alpha, v0);
    const CubicSpectrum s = solve_cubic_full(p.c2, p.c1, p.c0);

    StabilityReport r;
    r.v0 = v0;
    r.lambda0 = s.real_root;
    r.kappa = s.pair_re;
    // When the pair degenerates to two reals (triple-root corner) eta is the
    // half-spread of the real pair, still reported non-negative.
    r.eta = s.pair_im;
    r.slope = p.c0 / (1.0 + v0 * v0);
    r.unstable = p.c0 < 0.0;
    return r;
}

bool is_unstable(double alpha, double v0) { return char_poly(alpha, v0).c0 < 0.0; }

}  // namespace jjsim
