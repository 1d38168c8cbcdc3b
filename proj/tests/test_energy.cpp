#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cogrelay/energy.hpp"

using namespace cogrelay::energy;

TEST_CASE("selection probability") {
    const EnergyParams p{2.0, 3, 1.0};
    CHECK(selection_probability(p, 8.0).value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(selection_probability(p, 8.0).unconstrained);        // 0.5 >= 1/M
    CHECK_FALSE(selection_probability(p, 16.0).unconstrained);  // 0.25 < 1/M: eta < 1
    CHECK(selection_probability(EnergyParams{0.0, 3, 1.0}, 8.0).value == 0.0);
    const auto clamped = selection_probability(p, 1.0);  // raw omega = 4
    CHECK(clamped.value == 1.0);
    CHECK(clamped.unconstrained);
    CHECK_THROWS_AS((void)selection_probability(p, 0.0), std::invalid_argument);
}

TEST_CASE("relay active probability (eta)") {
    // unconstrained whenever p_sr <= 2*M*H_av
    const EnergyParams p3h2{2.0, 3, 1.0};
    CHECK(relay_active_probability(p3h2, 12.0) == 1.0);
    CHECK(relay_active_probability(p3h2, 5.0) == 1.0);

    const EnergyParams p3h1{1.0, 3, 1.0};
    CHECK(relay_active_probability(p3h1, 12.0) ==
          doctest::Approx(1.0 - std::cbrt(0.5)).epsilon(1e-14));
    CHECK(relay_active_probability(EnergyParams{0.0, 3, 1.0}, 12.0) == 0.0);

    // strictly decreasing beyond the boundary
    double prev = relay_active_probability(p3h1, 6.0);
    CHECK(prev == 1.0);
    for (double psr = 7.0; psr <= 40.0; psr += 1.0) {
        const double eta = relay_active_probability(p3h1, psr);
        CHECK(eta < prev);
        prev = eta;
    }
}

TEST_CASE("eta is continuous at the boundary") {
    const EnergyParams p{1.0, 3, 1.0};
    const double boundary = 2.0 * 3 * 1.0;
    const double below = relay_active_probability(p, boundary * (1.0 - 1e-9));
    const double above = relay_active_probability(p, boundary * (1.0 + 1e-9));
    CHECK(below == 1.0);
    CHECK(above == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("effective relay power") {
    const EnergyParams p{2.0, 3, 1.0};
    CHECK(effective_relay_power(p, 20.0) == 12.0);
    CHECK(effective_relay_power(EnergyParams{4.0, 3, 1.0}, 20.0) == 20.0);
    CHECK(effective_relay_power(p, 12.0) == 12.0);
}

TEST_CASE("aggregate outage") {
    // eta = 1: binomial mass collapses onto N = M
    const std::vector<double> by_n = {0.4, 0.2};
    CHECK(aggregate_outage(2, 1.0, by_n) == doctest::Approx(0.2).epsilon(1e-15));
    // eta = 0: no relay is ever active
    CHECK(aggregate_outage(2, 0.0, by_n) == 1.0);
    // hand arithmetic: 0.25*1 + 0.5*0.4 + 0.25*0.2
    CHECK(aggregate_outage(2, 0.5, by_n) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS((void)aggregate_outage(3, 0.5, by_n), std::invalid_argument);
    CHECK_THROWS_AS((void)aggregate_outage(2, 1.5, by_n), std::invalid_argument);
}

TEST_CASE("aggregate is nonincreasing in eta when per-N outage is nonincreasing") {
    const std::vector<double> by_n = {0.5, 0.3, 0.1};
    double prev = 1.0 + 1e-12;
    for (double eta = 0.0; eta <= 1.0; eta += 0.05) {
        const double v = aggregate_outage(3, std::min(eta, 1.0), by_n);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("binomial weights sum to one") {
    for (int m : {1, 3, 7, 16}) {
        for (double eta : {0.0, 0.2, 0.5, 0.9, 1.0}) {
            // outage_by_n of all ones makes the aggregate the total mass
            const std::vector<double> ones(static_cast<std::size_t>(m), 1.0);
            CHECK(aggregate_outage(m, eta, ones) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("tipping index") {
    const EnergyParams p{1.0, 3, 1.0};
    const std::vector<double> p_sr = {3.0, 5.0, 6.0, 7.0, 9.0};
    const auto idx = find_tipping_index(p, p_sr);
    REQUIRE(idx.has_value());
    CHECK(*idx == 3);  // first power beyond 2*M*H_av = 6
    const std::vector<double> low = {1.0, 2.0};
    CHECK_FALSE(find_tipping_index(p, low).has_value());
}
