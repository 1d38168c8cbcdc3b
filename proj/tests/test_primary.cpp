#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cogrelay/config.hpp"
#include "cogrelay/primary.hpp"
#include "cogrelay/sim.hpp"
#include "cogrelay/specmath.hpp"

using namespace cogrelay;

namespace {

primary::PrimaryScenario reference_scenario(int m_pp, int m_ip) {
    config::SystemConfig cfg;
    auto scn = cfg.primary_scenario_st();
    scn.link_pp.m = m_pp;
    scn.link_ip.m = m_ip;
    return scn;
}

}  // namespace

TEST_CASE("no interference reduces to the interference-free outage") {
    for (int m_pp : {1, 2, 3, 5}) {
        for (int m_ip : {1, 2}) {
            const auto scn = reference_scenario(m_pp, m_ip);
            const double expected = specmath::regularized_lower_gamma(
                m_pp, scn.link_pp.alpha() * scn.theta_p * scn.n0 / scn.p_pt);
            CHECK(primary::primary_outage(scn, 0.0) ==
                  doctest::Approx(expected).epsilon(1e-14));
        }
    }
}

TEST_CASE("m=1 closed form matches the hand-reduced Rayleigh expression") {
    const auto scn = reference_scenario(1, 1);
    const double a_pp = scn.link_pp.alpha();
    const double a_ip = scn.link_ip.alpha();
    for (double p : {0.0, 0.5, 5.0, 50.0, 500.0, 5000.0}) {
        const double hand = 1.0 - std::exp(-a_pp * scn.theta_p * scn.n0 / scn.p_pt) * a_ip /
                                      (a_ip + a_pp * scn.theta_p * p / scn.p_pt);
        CHECK(std::abs(primary::primary_outage(scn, p) - hand) <= 1e-12);
    }
}

TEST_CASE("closed form vs Monte Carlo at the reference parameters") {
    const auto scn = reference_scenario(2, 1);
    for (double p_i : {1.0, 100.0}) {
        const double closed = primary::primary_outage(scn, p_i);
        const auto mc = sim::run_primary_sim(scn, p_i, 1000000, 99);
        // binomial standard error under the closed-form null (the estimate's
        // own half-width degenerates when no outage lands in the sample)
        const double se = std::sqrt(closed * (1.0 - closed) / 1e6);
        CHECK(std::abs(mc.probability - closed) <= 3.0 * se);
    }
}

TEST_CASE("strictly increasing in interferer power") {
    const auto scn = reference_scenario(3, 2);
    double prev = primary::primary_outage(scn, 0.0);
    for (double p = 0.5; p <= 4000.0; p *= 1.7) {
        const double cur = primary::primary_outage(scn, p);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("probability bounds and extremes") {
    const auto scn = reference_scenario(2, 1);
    const double at_huge = primary::primary_outage(scn, 1e12);
    CHECK(at_huge <= 1.0);
    CHECK(at_huge > 0.99);
    CHECK(primary::primary_outage(scn, 0.0) >= 0.0);
}

TEST_CASE("order cap and domain errors") {
    auto scn = reference_scenario(9, 1);
    CHECK_THROWS_AS((void)primary::primary_outage(scn, 1.0), std::domain_error);
    scn = reference_scenario(2, 1);
    CHECK_THROWS_AS((void)primary::primary_outage(scn, -1.0), std::domain_error);
}

TEST_CASE("solve_max_power round trip") {
    const auto scn = reference_scenario(2, 1);
    for (double cap : {0.02, 0.05, 0.1, 0.2}) {
        const auto res = primary::solve_max_power(scn, cap);
        REQUIRE_FALSE(res.bracket_saturated);
        CHECK(std::abs(primary::primary_outage(scn, res.power) - cap) <= 1e-6);
    }
}

TEST_CASE("solve_max_power against a grid-search oracle") {
    const auto scn = reference_scenario(2, 1);
    const double cap = 0.1;
    const double solved = primary::solve_max_power(scn, cap).power;
    // brute force: finest grid point still satisfying the cap
    const double bracket = 1e4;
    const int n = 10000;
    double best = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double p = bracket * static_cast<double>(i) / n;
        if (primary::primary_outage(scn, p) <= cap) {
            best = p;
        } else {
            break;
        }
    }
    CHECK(solved == doctest::Approx(best).epsilon(2.0 / n));
    CHECK(solved >= best);
    CHECK(solved <= best + bracket / n);
}

TEST_CASE("solve_max_power boundary and infeasible caps") {
    const auto scn = reference_scenario(2, 1);
    const double floor = primary::primary_outage(scn, 0.0);

    // cap exactly at the zero-power floor: the only feasible power is 0
    const auto at_floor = primary::solve_max_power(scn, floor);
    CHECK(at_floor.power <= 1e-6);

    CHECK_THROWS_AS((void)primary::solve_max_power(scn, floor * 0.5), primary::InfeasibleError);
    CHECK_THROWS_AS((void)primary::solve_max_power(scn, 1.5), std::domain_error);
}

TEST_CASE("solve_max_power bracket saturation is flagged") {
    const auto scn = reference_scenario(2, 1);
    const auto res = primary::solve_max_power(scn, 0.9, 1.0);  // 1 W bracket is far too small
    CHECK(res.bracket_saturated);
    CHECK(res.power == 1.0);
}
