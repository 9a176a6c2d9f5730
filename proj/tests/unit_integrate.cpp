#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "jjsim/characteristic.hpp"
#include "jjsim/integrate.hpp"

using namespace jjsim;

namespace {

void decay_rhs(double, const std::array<double, 1>& y, std::array<double, 1>& dy) {
    dy[0] = -y[0];
}

void oscillator_rhs(double, const std::array<double, 2>& y, std::array<double, 2>& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
}

}  // namespace

TEST_CASE("adaptive integration of exponential decay hits the analytic value") {
    IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-12;
    cfg.dt_out = 0.5;
    const auto tr = integrate<1>(decay_rhs, {1.0}, 0.0, 10.0, cfg);
    REQUIRE(tr.t.size() == 21);
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        CHECK(tr.t[k] == doctest::Approx(0.5 * k).epsilon(1e-14));
        CHECK(tr.y[k][0] == doctest::Approx(std::exp(-tr.t[k])).epsilon(1e-8));
    }
    CHECK(tr.stats.accepted > 0);
    CHECK(tr.stats.rhs_evals > tr.stats.accepted);
}

TEST_CASE("output grid is uniform and lands exactly on the endpoint") {
    IntegratorConfig cfg;
    cfg.dt_out = 0.3;
    const auto tr = integrate<1>(decay_rhs, {1.0}, 0.0, 1.2, cfg);
    REQUIRE(tr.t.size() == 5);  // 0, 0.3, 0.6, 0.9, 1.2
    CHECK(tr.t.back() == doctest::Approx(1.2).epsilon(1e-12));

    // A span that is not a multiple of dt_out ends on the last full grid point.
    const auto tr2 = integrate<1>(decay_rhs, {1.0}, 0.0, 1.0, cfg);
    REQUIRE(tr2.t.size() == 4);  // 0, 0.3, 0.6, 0.9
    CHECK(tr2.t.back() == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("adaptive energy drift on the harmonic oscillator stays tiny") {
    IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-12;
    cfg.dt_out = 0.1;
    const auto tr = integrate<2>(oscillator_rhs, {1.0, 0.0}, 0.0, 100.0, cfg);
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        const double energy = tr.y[k][0] * tr.y[k][0] + tr.y[k][1] * tr.y[k][1];
        CHECK(energy == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("fixed-step integrator converges at fourth order") {
    auto endpoint_error = [](double h) {
        IntegratorConfig cfg;
        cfg.method = Method::fixed_rk4;
        cfg.dt_init = h;
        cfg.dt_out = 5.0;
        const auto tr = integrate<2>(oscillator_rhs, {1.0, 0.0}, 0.0, 5.0, cfg);
        return std::abs(tr.y.back()[0] - std::cos(5.0));
    };
    const double e1 = endpoint_error(0.02);
    const double e2 = endpoint_error(0.01);
    const double order = std::log2(e1 / e2);
    CHECK(order == doctest::Approx(4.0).epsilon(0.08));
}

TEST_CASE("fixed-step integrator requires a step compatible with the grid") {
    IntegratorConfig cfg;
    cfg.method = Method::fixed_rk4;
    cfg.dt_out = 0.1;
    cfg.dt_init = 0.0;
    CHECK_THROWS_AS(integrate<1>(decay_rhs, {1.0}, 0.0, 1.0, cfg), std::invalid_argument);
    cfg.dt_init = 0.2;  // larger than dt_out
    CHECK_THROWS_AS(integrate<1>(decay_rhs, {1.0}, 0.0, 1.0, cfg), std::invalid_argument);
}

TEST_CASE("dense output between accepted steps is smooth") {
    // Force big internal steps with loose tolerances, then sample densely;
    // the interpolant must stay close to the analytic solution.
    IntegratorConfig cfg;
    cfg.rtol = 1e-6;
    cfg.atol = 1e-8;
    cfg.dt_out = 0.01;
    const auto tr = integrate<2>(oscillator_rhs, {1.0, 0.0}, 0.0, 20.0, cfg);
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.t.size(); ++k)
        worst = std::max(worst, std::abs(tr.y[k][0] - std::cos(tr.t[k])));
    CHECK(worst < 1e-4);
}

TEST_CASE("blow-up aborts with a diagnostic instead of looping") {
    auto blowup = [](double, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = y[0] * y[0];  // finite-time singularity at t = 1
    };
    IntegratorConfig cfg;
    cfg.dt_out = 0.01;
    CHECK_THROWS_AS(integrate<1>(blowup, {1.0}, 0.0, 2.0, cfg), IntegrationError);
}

TEST_CASE("non-finite derivatives abort") {
    auto bad = [](double t, const std::array<double, 1>&, std::array<double, 1>& dy) {
        dy[0] = t < 0.5 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    };
    IntegratorConfig cfg;
    cfg.dt_out = 0.1;
    CHECK_THROWS_AS(integrate<1>(bad, {0.0}, 0.0, 1.0, cfg), IntegrationError);
}

TEST_CASE("both methods agree on a smooth circuit run") {
    const DimensionlessParams p{1.5, 4.0, std::nullopt};
    const CircuitState s0{0.1, 0.0, 0.0};
    IntegratorConfig tight;
    tight.rtol = 1e-11;
    tight.atol = 1e-12;
    tight.dt_out = 1.0;
    IntegratorConfig fixed;
    fixed.method = Method::fixed_rk4;
    fixed.dt_init = 1e-3;
    fixed.dt_out = 1.0;
    const auto a = integrate_circuit(p, s0, 0.0, 20.0, tight);
    const auto b = integrate_circuit(p, s0, 0.0, 20.0, fixed);
    REQUIRE(a.t.size() == b.t.size());
    for (std::size_t k = 0; k < a.t.size(); ++k)
        for (int c = 0; c < 3; ++c)
            CHECK(a.y[k][c] == doctest::Approx(b.y[k][c]).epsilon(1e-8).scale(1.0));
}

TEST_CASE("a stationary start stays put") {
    const double alpha = 4.0;
    const auto fps = fixed_points(alpha, 5.0);
    const CircuitState s0 = fps.front().state();
    const DimensionlessParams p{alpha, 5.0, std::nullopt};
    IntegratorConfig cfg;
    cfg.dt_out = 10.0;
    const auto tr = integrate_circuit(p, s0, 0.0, 50.0, cfg);
    CHECK(tr.y.back()[0] == doctest::Approx(s0.v).epsilon(1e-7).scale(1.0));
    CHECK(tr.y.back()[1] == doctest::Approx(s0.i_j).epsilon(1e-7).scale(1.0));
    CHECK(tr.y.back()[2] == doctest::Approx(s0.i_s).epsilon(1e-7).scale(1.0));
}

TEST_CASE("ramp run reports the bias split and the branch jumps") {
    RampSpec ramp;
    ramp.i_start = 4.0;
    ramp.i_peak = 11.0;
    ramp.i_end = 4.0;
    ramp.rate = 0.05;
    IntegratorConfig cfg;
    cfg.dt_out = 0.1;
    const RampResult res = ramp_sweep(4.0, ramp, cfg);
    REQUIRE(!res.samples.empty());
    CHECK(res.turn_index > 0);
    CHECK(res.samples[res.turn_index].tau >= ramp.tau_turn() - 0.2);

    for (std::size_t k = 0; k < res.samples.size(); k += 97) {
        const RampSample& s = res.samples[k];
        CHECK(s.i_tot == doctest::Approx(ramp.bias_at(s.tau)).epsilon(1e-12));
        // the three channels carry the whole bias
        CHECK(s.i_j + s.i_res + s.i_cap == doctest::Approx(s.i_tot).epsilon(1e-9).scale(1.0));
    }

    const SweepJumps jumps = detect_jumps(4.0, res);
    REQUIRE(jumps.i_up.has_value());
    REQUIRE(jumps.i_down.has_value());
    // fast ramp: jumps land near the fold bounds, generously bracketed
    CHECK(*jumps.i_up == doctest::Approx(9.073).epsilon(0.08));
    CHECK(*jumps.i_down == doctest::Approx(7.726).epsilon(0.08));
}

TEST_CASE("monotone characteristic never reports jumps") {
    RampSpec ramp;
    ramp.i_start = 0.5;
    ramp.i_peak = 8.0;
    ramp.i_end = 0.5;
    ramp.rate = 0.05;
    IntegratorConfig cfg;
    cfg.dt_out = 0.1;
    const SweepJumps jumps = detect_jumps(1.0, ramp_sweep(1.0, ramp, cfg));
    CHECK_FALSE(jumps.i_up.has_value());
    CHECK_FALSE(jumps.i_down.has_value());
}

TEST_CASE("quasi-static continuation lands on the characteristic") {
    IntegratorConfig cfg;
    cfg.dt_out = 0.1;
    const std::vector<double> biases{0.5, 1.5, 2.5, 3.5};
    const auto points = continuation_sweep(0.8, biases, cfg);
    REQUIRE(points.size() == biases.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        CHECK(points[k].settled);
        CHECK(points[k].i_tot == biases[k]);
        CHECK(i_of_v(0.8, points[k].v) == doctest::Approx(biases[k]).epsilon(1e-5));
    }
}

TEST_CASE("ramp input validation") {
    IntegratorConfig cfg;
    RampSpec bad;
    bad.i_start = 1.0;
    bad.i_peak = 0.5;  // peak below start
    bad.i_end = 0.0;
    bad.rate = 0.01;
    CHECK_THROWS_AS(ramp_sweep(1.0, bad, cfg), std::invalid_argument);
    bad.i_peak = 2.0;
    bad.rate = 0.0;
    CHECK_THROWS_AS(ramp_sweep(1.0, bad, cfg), std::invalid_argument);
}
