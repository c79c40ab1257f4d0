#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spinscatter/entanglement.hpp"
#include "spinscatter/models.hpp"

using namespace spinscatter;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("entanglement") {

TEST_CASE("logical angles") {
    SUBCASE("unit transmission ratio keeps theta") {
        for (double theta : {0.0, 0.4, kPi / 2, 2.5, kPi}) {
            const LogicalAngles a = logical_angles(0.3, 0.3, 0.0, theta, 0.0);
            CHECK(a.theta_tilde == doctest::Approx(theta).epsilon(1e-12));
        }
    }
    SUBCASE("theta = 0 maps to the pole") {
        CHECK(logical_angles(0.5, 0.1, 1.0, 0.0, 2.0).theta_tilde == 0.0);
    }
    SUBCASE("ratio 4 at theta = pi/2") {
        const LogicalAngles a = logical_angles(0.1, 0.4, 0.0, kPi / 2, 0.0);
        CHECK(a.theta_tilde == doctest::Approx(2.2142974355881808).epsilon(1e-13));
    }
    SUBCASE("theta = pi maps to pi for any T_plus > 0") {
        for (double tp : {1e-8, 0.2, 1.0}) {
            CHECK(logical_angles(0.5, tp, 0.0, kPi, 0.0).theta_tilde ==
                  doctest::Approx(kPi).epsilon(1e-13));
        }
    }
    SUBCASE("azimuth wraps into [0, 2pi)") {
        const LogicalAngles a = logical_angles(0.2, 0.2, 5.0, 0.3, 4.0);
        CHECK(a.phi_tilde >= 0.0);
        CHECK(a.phi_tilde < 2 * kPi);
        CHECK(a.phi_tilde == doctest::Approx(std::fmod(4.0 + 5.0 + kPi, 2 * kPi)).epsilon(1e-12));
    }
    SUBCASE("uncontrolled state is flagged") {
        CHECK_THROWS_AS(logical_angles(0.0, 0.3, 0.0, 1.0, 0.0), std::domain_error);
        CHECK_NOTHROW(logical_angles(0.0, 0.3, 0.0, kPi, 0.0));
    }
}

TEST_CASE("success probability") {
    CHECK(success_probability(0.37, 0.11, 0.0) == doctest::Approx(0.37).epsilon(1e-14));
    CHECK(success_probability(0.37, 0.11, kPi) == doctest::Approx(0.11).epsilon(1e-14));
    for (double tt : {0.1, 1.0, 2.0, 3.0})
        CHECK(success_probability(0.25, 0.25, tt) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(success_probability(0.0, 0.0, 1.0), std::domain_error);
}

TEST_CASE("averaged figure of merit") {
    CHECK(p2_bar(0.25, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p2_bar(0.9, 0.0) == 0.0);
    SUBCASE("quadrature identity on random inputs") {
        std::mt19937 rng(123);
        std::uniform_real_distribution<double> dist(1e-6, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            const double ti = dist(rng), tp = dist(rng);
            CHECK(std::abs(p2_bar_quadrature(ti, tp) - std::sqrt(ti * tp)) < 1e-8);
        }
    }
    SUBCASE("quadrature handles vanishing channels") {
        CHECK(p2_bar_quadrature(0.5, 0.0) == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(p2_bar_quadrature(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("any target angle is reachable and the map is monotone") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(1e-4, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const double ti = dist(rng), tp = dist(rng);
        SUBCASE("") {}
        for (int k = 0; k <= 10; ++k) {
            const double target = kPi * k / 10.0;
            const double theta =
                2.0 * std::atan2(std::sqrt(ti) * std::sin(0.5 * target),
                                 std::sqrt(tp) * std::cos(0.5 * target));
            const LogicalAngles a = logical_angles(ti, tp, 0.0, theta, 0.0);
            CHECK(std::abs(a.theta_tilde - target) < 1e-12);
        }
        double prev = -1.0;
        for (int k = 1; k < 40; ++k) {
            const double theta = kPi * k / 40.0;
            const double tt = logical_angles(ti, tp, 0.0, theta, 0.0).theta_tilde;
            CHECK(tt > prev);
            prev = tt;
        }
    }
}

TEST_CASE("projection of a real transmitted state") {
    const ScatteringModel m = kondo_contact_spread(0.5, -0.5, 2, 100.0);
    const ScatterOutcome o = solve_scattering(m, 2e-3, 0);
    REQUIRE(o.T(1) > 0.0);

    SUBCASE("poles") {
        const LogicalState north = project_transmitted(o, 0.0, 0.3);
        CHECK(north.p2 == doctest::Approx(o.T(0)).epsilon(1e-12));
        CHECK(std::abs(north.amp1) == 0.0);
        const LogicalState south = project_transmitted(o, kPi, 0.3);
        CHECK(south.p2 == doctest::Approx(o.T(1)).epsilon(1e-12));
        CHECK(std::abs(south.amp0) < 1e-12);
    }
    SUBCASE("norm equals the success probability") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> tdist(0.0, kPi), pdist(0.0, 2 * kPi);
        for (int trial = 0; trial < 30; ++trial) {
            const double theta = tdist(rng), phi = pdist(rng);
            const LogicalState st = project_transmitted(o, theta, phi);
            const double tt = logical_angles(o.T(0), o.T(1), *o.phi_plus(), theta, phi).theta_tilde;
            CHECK(std::abs(st.p2 - success_probability(o.T(0), o.T(1), tt)) < 1e-12);
            CHECK(std::abs(std::norm(st.amp0) + std::norm(st.amp1) - st.p2) < 1e-14);
        }
    }
    SUBCASE("bundled metrics") {
        std::vector<double> samples;
        for (int k = 0; k <= 16; ++k) samples.push_back(kPi * k / 16.0);
        const EntanglementResult res = analyze_transmission(o, samples);
        CHECK(res.T_i == o.T(0));
        CHECK(res.T_plus == o.T(1));
        CHECK(res.phi_plus == *o.phi_plus());
        REQUIRE(res.p2.size() == samples.size());
        for (size_t k = 0; k < samples.size(); ++k) {
            CHECK(res.p2[k] >= 0.0);
            CHECK(res.p2[k] <= 1.0);
            CHECK(res.p2[k] ==
                  doctest::Approx(success_probability(res.T_i, res.T_plus, samples[k]))
                      .epsilon(1e-14));
        }
        CHECK(std::abs(res.p2_bar - p2_bar_quadrature(res.T_i, res.T_plus)) < 1e-10);
        CHECK_THROWS_AS(analyze_transmission(o, {-0.1}), std::invalid_argument);
    }
    SUBCASE("closed |+> channel degenerates to |0>") {
        MolecularParams p;
        p.s = 1.0;
        p.D1 = p.D2 = -0.3;  // Delta_E = +0.3 meV with isotropic J12
        p.J12x = p.J12z = 1.0;
        p.J = -0.5;
        const ScatteringModel mol = molecular_block(p, 2, 100.0);
        const double K = 0.1;  // below the |+> threshold
        const ScatterOutcome closed = solve_scattering(mol, K, 0);
        REQUIRE_FALSE(closed.channels[1].open);
        const LogicalState st = project_transmitted(closed, 1.0, 0.5);
        CHECK(st.degenerate);
        CHECK(std::abs(st.amp1) == 0.0);
        CHECK(st.p2 == doctest::Approx(closed.T(0) * std::pow(std::cos(0.5), 2)).epsilon(1e-12));
    }
}

}  // TEST_SUITE
