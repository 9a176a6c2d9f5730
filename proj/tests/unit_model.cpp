#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "jjsim/model.hpp"

using namespace jjsim;

namespace {

PhysicalParams reference_params() {
    // 50 ohm, 0.3 pF shunt; K chosen complex to exercise the |K|^2 path.
    return make_physical_params(50.0, 3e-13, {3e10, 4e10}, 2e-7);
}

}  // namespace

TEST_CASE("scale factors for a 50 ohm, 0.3 pF shunt") {
    const auto nd = nondimensionalize(reference_params());
    CHECK(nd.scales.voltage == doctest::Approx(2.1940398551586915e-05).epsilon(1e-14));
    CHECK(nd.scales.current == doctest::Approx(4.3880797103173832e-07).epsilon(1e-14));
    CHECK(nd.scales.time == doctest::Approx(1.5e-11).epsilon(1e-14));
    CHECK(nd.params.alpha == doctest::Approx(0.5625).epsilon(1e-14));
    CHECK(nd.params.i_tot ==
          doctest::Approx(2e-7 / 4.3880797103173832e-07).epsilon(1e-14));
}

TEST_CASE("make_physical_params satisfies the consistency check") {
    const auto p = reference_params();
    CHECK(p.gamma == doctest::Approx(66666666666.666664).epsilon(1e-14));
    CHECK_NOTHROW(validate(p));
}

TEST_CASE("validate rejects inconsistent parameters") {
    PhysicalParams p = reference_params();
    p.gamma *= 1.5;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = reference_params();
    p.R = -1.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = reference_params();
    p.C = 0.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
}

TEST_CASE("undriven derivative matches the component formulas") {
    const DimensionlessParams p{2.5, 7.0, std::nullopt};
    const CircuitState s{1.2, -0.4, 0.9};
    const CircuitState d = rhs_autonomous(p, s);
    CHECK(d.v == doctest::Approx(7.0 - 1.2 - (-0.4)).epsilon(1e-15));
    CHECK(d.i_j == doctest::Approx(0.4 - (0.9 - 4.0 * 2.5) * 1.2).epsilon(1e-15));
    CHECK(d.i_s == doctest::Approx(-0.9 + (-0.4) * 1.2).epsilon(1e-15));
}

TEST_CASE("zero drive amplitude reproduces the undriven derivative exactly") {
    const DimensionlessParams undriven{1.7, 3.0, std::nullopt};
    DimensionlessParams driven = undriven;
    driven.drive = Drive{0.0, 12.0};
    std::mt19937 rng(321);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 200; ++k) {
        const CircuitState s{u(rng), u(rng), u(rng)};
        const double tau = u(rng);
        const CircuitState a = rhs_autonomous(undriven, s);
        const CircuitState b = rhs_driven(driven, s, tau);
        CHECK(a.v == b.v);
        CHECK(a.i_j == b.i_j);
        CHECK(a.i_s == b.i_s);
    }
}

TEST_CASE("drive enters only the phase-rotation products") {
    DimensionlessParams p{2.0, 5.0};
    p.drive = Drive{3.0, 10.0};
    const CircuitState s{0.8, 0.3, -0.6};
    const double tau = 0.37;
    const double w = 0.8 + 3.0 * std::cos(10.0 * tau);
    const CircuitState d = rhs_driven(p, s, tau);
    CHECK(d.v == doctest::Approx(5.0 - 0.8 - 0.3).epsilon(1e-15));
    CHECK(d.i_j == doctest::Approx(-0.3 - (-0.6) * w + 4.0 * 2.0 * 0.8).epsilon(1e-15));
    CHECK(d.i_s == doctest::Approx(0.6 + 0.3 * w).epsilon(1e-15));
}

TEST_CASE("electrode derivative conserves the exchange and relaxes the total") {
    const auto p = reference_params();
    const ElectrodeState s{800.0, 420.0, {3.0, -2.0}};
    const double nbar1 = 650.0;
    const double nbar2 = 610.0;
    const ElectrodeState d = rhs_electrodes(p, s, nbar1, nbar2);

    // Tunneling moves pairs between electrodes; only relaxation changes the sum.
    const double total_rate = d.n1 + d.n2;
    CHECK(total_rate ==
          doctest::Approx(-p.gamma * (s.n_total() - (nbar1 + nbar2))).epsilon(1e-12));

    const double exchange = 2.0 * std::imag(std::conj(p.K) * s.z);
    CHECK(d.n1 == doctest::Approx(-p.gamma * (s.n1 - nbar1) + exchange).epsilon(1e-12));
    CHECK(d.n2 == doctest::Approx(-p.gamma * (s.n2 - nbar2) - exchange).epsilon(1e-12));

    const PhysicalConstants k = codata();
    const std::complex<double> expected_dz =
        (std::complex<double>(0.0, 2.0 * k.e * k.e * s.n_diff() / (k.hbar * p.C)) - p.gamma) *
            s.z -
        std::complex<double>(0.0, 1.0) * p.K * s.n_diff();
    CHECK(std::abs(d.z - expected_dz) < 1e-12 * std::abs(expected_dz));
}

TEST_CASE("electrode derivative rejects negative populations") {
    const auto p = reference_params();
    CHECK_THROWS_AS(rhs_electrodes(p, {-1.0, 5.0, {0.0, 0.0}}, 1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("total number follows its closed-form relaxation") {
    CHECK(total_number_relaxation(1000.0, 800.0, 2.0, 0.7) ==
          doctest::Approx(800.0 + 200.0 * std::exp(-1.4)).epsilon(1e-15));
}

TEST_CASE("circuit and electrode coordinates round-trip") {
    const auto p = make_physical_params(50.0, 3e-13, {6.667e10, 0.0}, 2e-7);
    const auto nd = nondimensionalize(p);
    const CircuitState s{0.8, -0.15, 0.35};
    const ElectrodeState es = electrodes_from_circuit(s, p, nd.scales, 2000.0);
    CHECK(es.n_total() == doctest::Approx(2000.0).epsilon(1e-12));
    const CircuitState back = circuit_from_electrodes(es, p, nd.scales);
    CHECK(back.v == doctest::Approx(s.v).epsilon(1e-12));
    CHECK(back.i_j == doctest::Approx(s.i_j).epsilon(1e-12));
    CHECK(back.i_s == doctest::Approx(s.i_s).epsilon(1e-12));
}

TEST_CASE("coordinate projection requires a real tunneling rate") {
    const auto p = reference_params();  // complex K
    const auto nd = nondimensionalize(p);
    const ElectrodeState es{900.0, 1100.0, {1.0, 1.0}};
    CHECK_THROWS_AS(circuit_from_electrodes(es, p, nd.scales), std::invalid_argument);
    CHECK_THROWS_AS(electrodes_from_circuit({0.1, 0.0, 0.0}, p, nd.scales, 100.0),
                    std::invalid_argument);
}

TEST_CASE("electrode split refuses unphysical occupations") {
    const auto p = make_physical_params(50.0, 3e-13, {6.667e10, 0.0}, 0.0);
    const auto nd = nondimensionalize(p);
    // Large positive v needs n1 - n2 far negative; a tiny total cannot provide it.
    CHECK_THROWS_AS(electrodes_from_circuit({500.0, 0.0, 0.0}, p, nd.scales, 1.0),
                    std::invalid_argument);
}

TEST_CASE("reservoir rates map to the sustained bias current") {
    // Positive bias pushes the imbalance negative (v tracks -n_diff), so
    // pumping electrode 2 harder carries positive current.
    const PhysicalConstants k = codata();
    const double g1 = 5e12;
    const double g2 = 2e12;
    CHECK(external_current_from_rates(g1, g2) ==
          doctest::Approx(-k.e * (g1 - g2)).epsilon(1e-15));
    CHECK(external_current_from_rates(g2, g1) > 0.0);
}

TEST_CASE("energy difference accessor uses the charging energy") {
    const PhysicalConstants k = codata();
    const ElectrodeState s{700.0, 300.0, {0.0, 0.0}};
    CHECK(s.energy_difference(3e-13) ==
          doctest::Approx(2.0 * k.e * k.e * 400.0 / 3e-13).epsilon(1e-15));
}
