#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "jjsim/characteristic.hpp"
#include "jjsim/cubic.hpp"
#include "jjsim/model.hpp"
#include "jjsim/stability.hpp"

using namespace jjsim;

namespace {

// Derivative of the reduced equations at the stationary point, by central
// differences, to pin the analytic Jacobian.
Mat3 numeric_jacobian(double alpha, double v0) {
    const double den = 1.0 + v0 * v0;
    const CircuitState s0{v0, 4.0 * alpha * v0 / den, 4.0 * alpha * v0 * v0 / den};
    const DimensionlessParams p{alpha, i_of_v(alpha, v0), std::nullopt};
    const double h = 1e-6;
    Mat3 j{};
    for (int col = 0; col < 3; ++col) {
        CircuitState lo = s0;
        CircuitState hi = s0;
        double* lo_c = col == 0 ? &lo.v : col == 1 ? &lo.i_j : &lo.i_s;
        double* hi_c = col == 0 ? &hi.v : col == 1 ? &hi.i_j : &hi.i_s;
        *lo_c -= h;
        *hi_c += h;
        const CircuitState flo = rhs_autonomous(p, lo);
        const CircuitState fhi = rhs_autonomous(p, hi);
        j[0][col] = (fhi.v - flo.v) / (2.0 * h);
        j[1][col] = (fhi.i_j - flo.i_j) / (2.0 * h);
        j[2][col] = (fhi.i_s - flo.i_s) / (2.0 * h);
    }
    return j;
}

}  // namespace

TEST_CASE("analytic Jacobian matches a finite-difference one") {
    for (auto [alpha, v0] : {std::pair{0.5, 0.3}, {2.2, 30.0}, {6.0, 2.0}, {4.0, 1.0}}) {
        const Mat3 a = jacobian(alpha, v0);
        const Mat3 n = numeric_jacobian(alpha, v0);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                CHECK(a[r][c] == doctest::Approx(n[r][c]).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("characteristic polynomial coefficients at pinned points") {
    SUBCASE("strongly coupled, low voltage") {
        const CharPoly cp = char_poly(6.0, 2.0);
        CHECK(cp.c2 == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(cp.c1 == doctest::Approx(11.800000000000001).epsilon(1e-14));
        CHECK(cp.c0 == doctest::Approx(-9.3999999999999986).epsilon(1e-14));
    }
    SUBCASE("weakly coupled, high voltage") {
        const CharPoly cp = char_poly(2.2, 30.0);
        CHECK(cp.c1 == doctest::Approx(903.00976692563813).epsilon(1e-14));
        CHECK(cp.c0 == doctest::Approx(892.21953385127631).epsilon(1e-14));
    }
}

TEST_CASE("eigenvalue summary at pinned points") {
    SUBCASE("unstable point") {
        const StabilityReport r = eigenvalues(6.0, 2.0);
        CHECK(r.lambda0 == doctest::Approx(0.66103702178042689).epsilon(1e-12));
        CHECK(r.kappa == doctest::Approx(-1.8305185108902124).epsilon(1e-12));
        CHECK(r.eta == doctest::Approx(3.296859564918392).epsilon(1e-12));
        CHECK(r.unstable);
        CHECK(r.slope < 0.0);
    }
    SUBCASE("stable point") {
        const StabilityReport r = eigenvalues(2.2, 30.0);
        CHECK(r.lambda0 == doctest::Approx(-0.99023318138788152).epsilon(1e-12));
        CHECK(r.kappa == doctest::Approx(-1.0048834093060584).epsilon(1e-12));
        CHECK(r.eta == doctest::Approx(30.000163974030169).epsilon(1e-12));
        CHECK_FALSE(r.unstable);
        CHECK(r.slope > 0.0);
    }
}

TEST_CASE("constant coefficient carries the slope of the characteristic") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ua(0.01, 10.0);
    std::uniform_real_distribution<double> uv(0.0, 50.0);
    for (int k = 0; k < 2000; ++k) {
        const double alpha = ua(rng);
        const double v0 = uv(rng);
        const CharPoly cp = char_poly(alpha, v0);
        CHECK(cp.c0 == doctest::Approx((1.0 + v0 * v0) * i_of_v_derivative(alpha, v0))
                           .epsilon(1e-12)
                           .scale(1.0 + std::abs(cp.c0)));
        CHECK(is_unstable(alpha, v0) == (i_of_v_derivative(alpha, v0) < 0.0));
    }
}

TEST_CASE("eigenvalues satisfy the cubic and its Vieta relations") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ua(0.01, 10.0);
    std::uniform_real_distribution<double> uv(0.0, 50.0);
    for (int k = 0; k < 2000; ++k) {
        const double alpha = ua(rng);
        const double v0 = uv(rng);
        const CharPoly cp = char_poly(alpha, v0);
        const StabilityReport r = eigenvalues(alpha, v0);
        // sum of roots = -c2, product = -c0, pairwise sum = c1
        const double sum = r.lambda0 + 2.0 * r.kappa;
        const double prod = r.lambda0 * (r.kappa * r.kappa + r.eta * r.eta);
        const double pair_sum =
            r.kappa * r.kappa + r.eta * r.eta + 2.0 * r.lambda0 * r.kappa;
        const double scale = 1.0 + std::abs(cp.c0) + std::abs(cp.c1);
        CHECK(sum == doctest::Approx(-3.0).epsilon(1e-9).scale(scale));
        CHECK(prod == doctest::Approx(-cp.c0).epsilon(1e-9).scale(scale));
        CHECK(pair_sum == doctest::Approx(cp.c1).epsilon(1e-9).scale(scale));
    }
}

TEST_CASE("complex pair never crosses the imaginary axis") {
    // The oscillatory pair keeps a real part at or below -1, so the loss of
    // stability always happens through the real eigenvalue.
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> ua(0.0, 10.0);
    std::uniform_real_distribution<double> uv(0.0, 50.0);
    for (int k = 0; k < 5000; ++k) {
        const StabilityReport r = eigenvalues(ua(rng), uv(rng));
        CHECK(r.kappa <= -1.0 + 1e-9);
    }
}

TEST_CASE("cubic solver handles the degenerate shapes") {
    SUBCASE("three distinct roots") {
        const CubicRoots r = solve_cubic(-6.0, 11.0, -6.0);  // (x-1)(x-2)(x-3)
        REQUIRE(r.count == 3);
        CHECK(r.root[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.root[1] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(r.root[2] == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("double root") {
        const CubicRoots r = solve_cubic(-5.0, 8.0, -4.0);  // (x-1)(x-2)^2
        REQUIRE(r.count == 3);
        CHECK(r.root[0] == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(r.root[1] == doctest::Approx(2.0).epsilon(1e-7));
        CHECK(r.root[2] == doctest::Approx(2.0).epsilon(1e-7));
    }
    SUBCASE("triple root") {
        const CubicRoots r = solve_cubic(3.0, 3.0, 1.0);  // (x+1)^3
        REQUIRE(r.count == 3);
        for (int k = 0; k < 3; ++k) CHECK(r.root[k] == doctest::Approx(-1.0).epsilon(1e-6));
    }
    SUBCASE("one real root") {
        const CubicRoots r = solve_cubic(0.0, 1.0, -2.0);  // x^3 + x - 2
        REQUIRE(r.count == 1);
        CHECK(r.root[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("full spectrum splits off the conjugate pair") {
        const CubicSpectrum s = solve_cubic_full(0.0, 1.0, -2.0);
        CHECK(s.real_root == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(s.pair_is_complex);
        // x^2 + x + 2 has roots -1/2 +- i sqrt(7)/2
        CHECK(s.pair_re == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(s.pair_im == doctest::Approx(std::sqrt(7.0) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("cubic roots survive huge coefficient spreads") {
    // (x - 1e-8)(x - 1)(x - 1e8)
    const double b = -(1e-8 + 1.0 + 1e8);
    const double c = 1e-8 * 1.0 + 1e-8 * 1e8 + 1.0 * 1e8;
    const double d = -1e-8 * 1.0 * 1e8;
    const CubicRoots r = solve_cubic(b, c, d);
    REQUIRE(r.count == 3);
    CHECK(r.root[0] == doctest::Approx(1e-8).epsilon(1e-6));
    CHECK(r.root[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.root[2] == doctest::Approx(1e8).epsilon(1e-9));
}
