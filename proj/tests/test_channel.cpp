#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cogrelay/channel.hpp"
#include "cogrelay/quadrature.hpp"

using namespace cogrelay;
using channel::LinkSpec;

TEST_CASE("gain_cdf pinned values") {
    CHECK(channel::gain_cdf({1, 1.0}, 0.0) == 0.0);
    CHECK(channel::gain_cdf({1, 2.0}, 2.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    // quadrature-derived (alpha = 3, so P(3, 3))
    CHECK(channel::gain_cdf({3, 1.0}, 1.0) == doctest::Approx(0.5768099188731565).epsilon(1e-10));
}

TEST_CASE("m=1 is exactly the exponential power gain") {
    const LinkSpec link{1, 2.5};
    for (double u = 0.0; u <= 20.0; u += 0.37) {
        CHECK(std::abs(channel::gain_cdf(link, u) - (1.0 - std::exp(-u / link.omega))) <= 1e-12);
    }
}

TEST_CASE("gain_cdf is a CDF") {
    const LinkSpec link{4, 0.8};
    CHECK(channel::gain_cdf(link, 0.0) == 0.0);
    double prev = 0.0;
    for (double u = 0.05; u <= 12.0; u += 0.05) {
        const double c = channel::gain_cdf(link, u);
        CHECK(c >= prev);
        prev = c;
    }
    CHECK(channel::gain_cdf(link, 1e4) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gain_pdf integrates to gain_cdf") {
    const LinkSpec link{3, 0.7};
    for (double u : {0.2, 0.7, 2.5}) {
        const double integral =
            quadrature::integrate([&](double t) { return channel::gain_pdf(link, t); }, 0.0, u)
                .value;
        CHECK(integral == doctest::Approx(channel::gain_cdf(link, u)).epsilon(1e-10));
    }
    CHECK(channel::gain_pdf(link, -1.0) == 0.0);
    CHECK(channel::gain_pdf(link, 0.0) == 0.0);
    CHECK(channel::gain_pdf({1, 2.0}, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("topology mean gains") {
    const channel::Topology topo;  // reference placement
    CHECK(topo.mean_gain(topo.st, topo.relays) == doctest::Approx(1.6e-7).epsilon(1e-12));
    CHECK(topo.mean_gain(topo.relays, topo.sd) == doctest::Approx(1.6e-7).epsilon(1e-12));
    // PT (50,50) to SD (100,0): distance sqrt(5000), gain 5000^-2
    CHECK(topo.mean_gain(topo.pt, topo.sd) == doctest::Approx(4e-8).epsilon(1e-12));
}

TEST_CASE("topology validation rejects collocated nodes and bad exponents") {
    channel::Topology topo;
    topo.pd = topo.pt;
    CHECK_THROWS_AS(topo.validate(), std::invalid_argument);
    channel::Topology topo2;
    topo2.path_loss_exponent = 0.0;
    CHECK_THROWS_AS(topo2.validate(), std::invalid_argument);
}

TEST_CASE("link validation") {
    CHECK_THROWS_AS((LinkSpec{0, 1.0}).validate("x"), std::invalid_argument);
    CHECK_THROWS_AS((LinkSpec{1, 0.0}).validate("x"), std::invalid_argument);
    CHECK_THROWS_AS((LinkSpec{1, -2.0}).validate("x"), std::invalid_argument);
    CHECK((LinkSpec{3, 1.5}).alpha() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("sampling: Kolmogorov-Smirnov against the analytic CDF") {
    const LinkSpec link{1, 1.0};
    const std::size_t n = 1u << 20;
    kernels::CounterStream s = kernels::CounterStream::derive(31337, 1);
    std::vector<double> draws(n);
    for (auto& d : draws) d = channel::sample_gain(link, s);
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = channel::gain_cdf(link, draws[i]);
        ks = std::max(ks, std::abs(c - static_cast<double>(i) / n));
        ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - c));
    }
    CHECK(ks < 0.002);
}

TEST_CASE("sampling: moments of Gamma(4, 3/4)") {
    const LinkSpec link{4, 3.0};
    const std::size_t n = 1u << 20;
    kernels::CounterStream s = kernels::CounterStream::derive(777, 2);
    double mean = 0.0;
    std::vector<double> draws(n);
    for (auto& d : draws) {
        d = channel::sample_gain(link, s);
        CHECK(d > 0.0);
        mean += d;
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const double d : draws) var += (d - mean) * (d - mean);
    var /= static_cast<double>(n - 1);
    CHECK(std::abs(mean - 3.0) < 0.01);
    CHECK(std::abs(var - 2.25) < 0.05);
}

TEST_CASE("sampling is reproducible for a fixed seed") {
    const LinkSpec link{3, 0.5};
    kernels::CounterStream a = kernels::CounterStream::derive(5, 5);
    kernels::CounterStream b = kernels::CounterStream::derive(5, 5);
    for (int i = 0; i < 256; ++i) {
        CHECK(channel::sample_gain(link, a) == channel::sample_gain(link, b));
    }
}

TEST_CASE("build_links assigns severity classes") {
    const channel::Topology topo;
    const auto ls = channel::build_links(topo, 2, 1, 2);
    CHECK(ls.st_sr.m == 2);
    CHECK(ls.sr_sd.m == 2);
    CHECK(ls.pt_sr.m == 1);
    CHECK(ls.pt_sd.m == 1);
    CHECK(ls.st_pd.m == 1);
    CHECK(ls.sr_pd.m == 1);
    CHECK(ls.pt_pd.m == 2);
    CHECK(ls.st_sr.omega == doctest::Approx(1.6e-7).epsilon(1e-12));
    CHECK(ls.pt_sd.omega == doctest::Approx(4e-8).epsilon(1e-12));
    CHECK(ls.st_pd.omega == doctest::Approx(6.4e-9).epsilon(1e-12));
}
