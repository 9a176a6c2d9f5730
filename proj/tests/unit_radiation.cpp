#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "jjsim/model.hpp"
#include "jjsim/radiation.hpp"

using namespace jjsim;

TEST_CASE("pure tipped state is pure and conserves the total") {
    const CollectiveState s = dicke_pure_state(100.0, 0.01);
    CHECK(s.n_total == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(s.n1() == doctest::Approx(99.0).epsilon(1e-13));
    CHECK(s.n2() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::norm(s.z) == doctest::Approx(s.n1() * s.n2()).epsilon(1e-12));
    CHECK_THROWS_AS((void)dicke_pure_state(-1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)dicke_pure_state(10.0, 1.5), std::invalid_argument);
}

TEST_CASE("collective decay drains the imbalance at the coherence rate") {
    const CollectiveState s{40.0, {3.0, -4.0}, 100.0};
    const CollectiveState d = rhs_dicke(2.0, 0.5, s);
    CHECK(d.n_diff == doctest::Approx(-2.0 * 0.5 * 25.0).epsilon(1e-14));
    const std::complex<double> expected =
        std::complex<double>(0.0, -2.0) * s.z + 0.5 * 0.5 * 40.0 * s.z;
    CHECK(std::abs(d.z - expected) < 1e-12);
    CHECK(d.n_total == 0.0);
}

TEST_CASE("purity survives the collective decay") {
    const CollectiveState s0 = dicke_pure_state(100.0, 0.01);
    IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-10;
    cfg.dt_out = 1e-4;
    const auto tr = integrate_dicke(3.0, 1.0, s0, 0.0, 0.2, cfg);
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        const double n1 = 0.5 * (100.0 + tr.y[k][0]);
        const double n2 = 0.5 * (100.0 - tr.y[k][0]);
        const double zsq = tr.y[k][1] * tr.y[k][1] + tr.y[k][2] * tr.y[k][2];
        // the invariant has magnitude N^2/4, so the drift bound scales with N^2
        CHECK(std::abs(n1 * n2 - zsq) < 1e-8 * 100.0 * 100.0);
    }
}

TEST_CASE("excited population follows the logistic closed form") {
    // gamma_e = 1, N = 2, 1% tip: n1(t) = N n10 / (n10 + (N - n10) e^{N t})
    const CollectiveState s0 = dicke_pure_state(2.0, 0.01);
    REQUIRE(s0.n1() == doctest::Approx(1.98).epsilon(1e-14));
    IntegratorConfig cfg;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-13;
    cfg.dt_out = 0.5;
    const auto tr = integrate_dicke(5.0, 1.0, s0, 0.0, 2.0, cfg);
    REQUIRE(tr.t.size() == 5);
    auto logistic = [](double t) {
        return 2.0 * 1.98 / (1.98 + 0.02 * std::exp(2.0 * t));
    };
    // two externally computed anchors guard the formula itself
    CHECK(logistic(1.0) == doctest::Approx(1.8610936806872389).epsilon(1e-15));
    CHECK(logistic(2.0) == doctest::Approx(1.2890780257267058).epsilon(1e-15));
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        const double n1 = 0.5 * (2.0 + tr.y[k][0]);
        CHECK(n1 == doctest::Approx(logistic(tr.t[k])).epsilon(1e-9));
    }
}

TEST_CASE("peak emission scales as the square of the ensemble size") {
    IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-10;
    for (double N : {10.0, 100.0, 1000.0}) {
        const double horizon = 20.0 / N;  // collective timescale 1/(gamma_e N)
        cfg.dt_out = horizon / 4000.0;
        const auto tr = integrate_dicke(1.0, 1.0, dicke_pure_state(N, 0.01), 0.0, horizon, cfg);
        double peak = 0.0;
        for (std::size_t k = 0; k < tr.t.size(); ++k)
            peak = std::max(peak, tr.y[k][1] * tr.y[k][1] + tr.y[k][2] * tr.y[k][2]);
        // purity makes the maximum exactly N^2/4 at half de-excitation
        CHECK(peak == doctest::Approx(N * N / 4.0).epsilon(1e-4));
    }
}

TEST_CASE("radiated power formula") {
    const PhysicalConstants k = codata();
    CHECK(dicke_power(2.0, 3.0, {3.0, 4.0}) ==
          doctest::Approx(k.hbar * 3.0 * 2.0 * 25.0).epsilon(1e-14));
}

TEST_CASE("voltage-to-frequency conversion and dipole scale") {
    const PhysicalConstants k = codata();
    CHECK(josephson_frequency(1e-3) ==
          doctest::Approx(3038534897619.021).epsilon(1e-14));
    CHECK(dipole_moment(1e-9) == doctest::Approx(2.0 * k.e * 1e-9).epsilon(1e-15));
}

TEST_CASE("free-space emission rate and wavelength at a pinned point") {
    const double om = 3038534897619.021;
    CHECK(spontaneous_rate(dipole_moment(1e-9), om) ==
          doctest::Approx(479.59547227451219).epsilon(1e-12));
    CHECK(emission_wavelength(om) ==
          doctest::Approx(0.00061992099178616376).epsilon(1e-13));
    CHECK_THROWS_AS((void)emission_wavelength(0.0), std::invalid_argument);
}

TEST_CASE("cavity enhancement at half-wavelength size") {
    const double ge = 479.59547227451219;
    const double lam = 0.00061992099178616376;
    CHECK(purcell_rate(ge, 100.0, lam, lam / 2.0) ==
          doctest::Approx(29155.90855221574).epsilon(1e-12));
    CHECK_THROWS_AS((void)purcell_rate(ge, 100.0, lam, 0.0), std::invalid_argument);
}

TEST_CASE("open-space efficiency at a pinned operating point") {
    auto p = make_physical_params(50.0, 3e-13, {0.0, 0.0}, 1e-3);
    CHECK(efficiency_open_space(p, 1e-3, 1e-9, 1e-3) ==
          doctest::Approx(1.4777185024025597e-07).epsilon(1e-12));
    CHECK(efficiency_cavity(1.4777185024025597e-07, 1e4) ==
          doctest::Approx(0.1 * 1e4 * 1.4777185024025597e-07).epsilon(1e-14));
    CHECK_THROWS_AS((void)efficiency_cavity(1e-7, 0.0), std::invalid_argument);
}

TEST_CASE("fed-back junction: stationary coherence annihilates the derivative") {
    auto p = make_physical_params(50.0, 3e-13, {6.667e10, 0.0}, 1e-3);
    const double gamma_e = 500.0;
    const double V = 1e-3;
    const std::complex<double> z0 = stationary_coherence(p, gamma_e, V);
    const EmitterCircuitState d = rhs_superradiant_jj(p, gamma_e, {V, z0});
    // V is not stationary in general, but the coherence equation must balance.
    CHECK(std::abs(d.z) < 1e-6 * std::abs(z0) * josephson_frequency(V));
}

TEST_CASE("weak damping limit of the stationary coherence") {
    auto p = make_physical_params(50.0, 3e-13, {6.667e10, 0.0}, 1e-3);
    const double target = weak_damping_coherence_sq(6.667e10, 3e-13);
    // at large voltage the rotation rate dwarfs every decay rate
    const double V = 0.5;
    const std::complex<double> z0 = stationary_coherence(p, 500.0, V);
    const double ratio = std::norm(z0) / target;
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-4));

    // closure: with the critical current of a frozen coherence, 4eK|z0|,
    // the limit satisfies |z0|^2 = hbar C I_c / (8 e^3)
    const PhysicalConstants k{};
    const double i_c = 4.0 * k.e * 6.667e10 * std::sqrt(target);
    CHECK(target == doctest::Approx(k.hbar * p.C * i_c / (8.0 * k.e * k.e * k.e)).epsilon(1e-12));
}

TEST_CASE("radiating junction integrates to finite, bounded values") {
    // unbiased: the junction discharges through R while radiating, so the
    // rotation rate stays resolvable by the adaptive step
    auto p = make_physical_params(50.0, 3e-13, {6.667e10, 0.0}, 0.0);
    const double gamma_e = 479.59547227451219;
    IntegratorConfig cfg;
    cfg.rtol = 1e-8;
    // the coherence reaches ~1e4 while the voltage stays ~1e-4, so a
    // dimensionless-scale atol would strangle the step size at z = 0
    cfg.atol = 1e-6;
    cfg.dt_out = 1e-12;
    const auto tr = integrate_superradiant_jj(p, gamma_e, {5e-4, {0.0, 0.0}}, 0.0, 5e-11, cfg);
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        CHECK(std::isfinite(tr.y[k][0]));
        CHECK(std::abs(tr.y[k][0]) < 1.0);  // stays in the millivolt regime
        CHECK(std::isfinite(tr.y[k][1]));
        CHECK(std::isfinite(tr.y[k][2]));
    }
}
