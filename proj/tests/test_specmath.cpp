#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cogrelay/quadrature.hpp"
#include "cogrelay/specmath.hpp"

using namespace cogrelay;
using specmath::regularized_lower_gamma;
using specmath::regularized_upper_gamma;

namespace {

// Independent oracle: quadrature of the Gamma density on [0, x].
double lower_gamma_by_quadrature(int a, double x) {
    if (x == 0.0) return 0.0;
    const double lognorm = specmath::log_factorial(a - 1);
    return quadrature::integrate(
               [a, lognorm](double t) {
                   if (a > 1 && t == 0.0) return 0.0;
                   return std::exp((a - 1) * (t > 0.0 ? std::log(t) : 0.0) - t - lognorm);
               },
               0.0, x, 1e-13, 1e-13)
        .value;
}

}  // namespace

TEST_CASE("lower gamma: pinned values") {
    CHECK(regularized_lower_gamma(1, 0.0) == 0.0);
    CHECK(regularized_lower_gamma(1, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-12));
    // quadrature-derived
    CHECK(regularized_lower_gamma(3, 2.0) ==
          doctest::Approx(0.3233235838169365).epsilon(1e-10));
}

TEST_CASE("upper gamma: pinned values") {
    CHECK(regularized_upper_gamma(1, 0.0) == 1.0);
    CHECK(regularized_upper_gamma(2, 1.0) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-12));
    // quadrature-derived; analytically (71/3) e^-4
    CHECK(regularized_upper_gamma(4, 4.0) ==
          doctest::Approx(0.4334701203667089).epsilon(1e-10));
    CHECK(regularized_upper_gamma(4, 4.0) ==
          doctest::Approx((71.0 / 3.0) * std::exp(-4.0)).epsilon(1e-12));
}

TEST_CASE("gamma vs quadrature oracle across orders") {
    double worst = 0.0;
    for (int a = 1; a <= 10; ++a) {
        for (double x : {0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 35.0, 50.0}) {
            const double err =
                std::abs(regularized_lower_gamma(a, x) - lower_gamma_by_quadrature(a, x));
            worst = std::max(worst, err);
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("lower + upper is exactly one") {
    for (int a = 1; a <= 10; ++a) {
        for (double x = 0.0; x <= 50.0; x += 0.7) {
            CHECK(regularized_lower_gamma(a, x) + regularized_upper_gamma(a, x) == 1.0);
        }
    }
}

TEST_CASE("lower gamma strictly increasing in x") {
    for (int a : {1, 3, 8}) {
        double prev = regularized_lower_gamma(a, 0.0);
        for (double x = 0.25; x <= 30.0; x += 0.25) {
            const double cur = regularized_lower_gamma(a, x);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("gamma domain errors") {
    CHECK_THROWS_AS((void)regularized_lower_gamma(0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)regularized_lower_gamma(-2, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)regularized_lower_gamma(1, -0.5), std::domain_error);
    CHECK_THROWS_AS((void)regularized_upper_gamma(0, 1.0), std::domain_error);
}

TEST_CASE("binomial") {
    CHECK(specmath::binomial(5, 2) == 10);
    CHECK(specmath::binomial(10, 5) == 252);
    CHECK(specmath::binomial(7, 0) == 1);
    CHECK(specmath::binomial(0, 0) == 1);
    CHECK(specmath::binomial(62, 31) == 465428353255261088ull);
    CHECK_THROWS_AS((void)specmath::binomial(63, 31), std::overflow_error);
    CHECK_THROWS_AS((void)specmath::binomial(5, 6), std::domain_error);
    CHECK_THROWS_AS((void)specmath::binomial(-1, 0), std::domain_error);
}

TEST_CASE("log_factorial") {
    CHECK(specmath::log_factorial(0) == 0.0);
    CHECK(specmath::log_factorial(1) == 0.0);
    CHECK(specmath::log_factorial(10) == doctest::Approx(std::log(3628800.0)).epsilon(1e-14));
    CHECK(specmath::log_factorial(300) ==
          doctest::Approx(std::lgamma(301.0)).epsilon(1e-14));
    CHECK_THROWS_AS((void)specmath::log_factorial(-1), std::domain_error);
}

TEST_CASE("compensated sum beats naive summation") {
    specmath::CompensatedSum s;
    s.add(1e16);
    s.add(1.0);  // lost entirely by naive accumulation (ulp at 1e16 is 2)
    s.add(-1e16);
    CHECK(s.value() == 1.0);
}

TEST_CASE("signed accumulator cancellation detection") {
    specmath::SignedAccumulator acc;
    acc.add(1.0, false);
    acc.add(1.0, true);
    acc.add(3e-13, false);
    CHECK(acc.value() == doctest::Approx(3e-13).epsilon(1e-3));
    CHECK(acc.cancellation_exceeds(1e-12));

    specmath::SignedAccumulator healthy;
    healthy.add(2.0, false);
    healthy.add(1.0, true);
    CHECK_FALSE(healthy.cancellation_exceeds(1e-12));
}
