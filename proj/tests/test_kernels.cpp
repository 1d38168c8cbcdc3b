#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "cogrelay/kernels.hpp"

using namespace cogrelay::kernels;

namespace {

bool have_avx2() { return cpu_supports(Isa::avx2); }

// Runs `fn` under both backends and requires bitwise-identical buffers.
template <typename Fn>
void check_bitwise_equivalence(Fn fn) {
    if (!have_avx2()) {
        MESSAGE("AVX2 unavailable; equivalence check skipped");
        return;
    }
    force_isa(Isa::scalar);
    const std::vector<double> a = fn();
    force_isa(Isa::avx2);
    const std::vector<double> b = fn();
    force_isa(Isa::scalar);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

const std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 17, 1000, 1003};

}  // namespace

TEST_CASE("unit mapping stays inside the open interval") {
    CHECK(word_to_unit(0) > 0.0);
    CHECK(word_to_unit(~0ull) < 1.0);
    CHECK(word_to_unit(0) == 0.5 * 0x1.0p-52);
}

TEST_CASE("polynomial log matches libm to a few ulp on (0,1]") {
    CounterStream s = CounterStream::derive(99, 1);
    double worst = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = s.next_unit();
        const double mine = log_positive(u);
        const double ref = std::log(u);
        worst = std::max(worst, std::abs(mine - ref) / std::abs(ref));
    }
    // also scan a few thousand ulps around the delicate points: 1.0 and the
    // mantissa-fold boundary at sqrt(2)/2
    for (double anchor : {1.0, 0.7071067811865476}) {
        double lo = anchor, hi = anchor;
        for (int i = 0; i < 4000; ++i) {
            lo = std::nextafter(lo, 0.0);
            hi = std::nextafter(hi, 2.0);
            for (const double x : {lo, std::min(hi, 1.0)}) {
                const double ref = std::log(x);
                if (ref == 0.0) continue;
                worst = std::max(worst, std::abs(log_positive(x) - ref) / std::abs(ref));
            }
        }
    }
    CHECK(worst <= 1e-14);
    CHECK(log_positive(1.0) == 0.0);
}

TEST_CASE("counter stream: deterministic, reproducible, positive draws") {
    CounterStream a = CounterStream::derive(12345, 7);
    CounterStream b = CounterStream::derive(12345, 7);
    for (int i = 0; i < 1000; ++i) {
        const double ea = a.next_exponential();
        const double eb = b.next_exponential();
        CHECK(ea == eb);
        CHECK(ea > 0.0);
    }
    CounterStream c = CounterStream::derive(12345, 8);
    CHECK(c.next_u64() != CounterStream::derive(12345, 7).next_u64());
}

TEST_CASE("single draws equal batch fills element-wise") {
    const std::uint64_t seed = 4242;
    for (int shape : {1, 2, 5, 8}) {
        CounterStream s = CounterStream::derive(seed, 3);
        std::vector<double> batch(64);
        fill_erlang(s.base, 0, shape, 1.75, batch.size(), batch.data());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            CHECK(s.next_erlang(shape, 1.75) == batch[i]);
        }
    }
}

TEST_CASE("scalar and AVX2 backends are bit-identical") {
    const std::uint64_t base = CounterStream::derive(777, 1).base;
    for (const std::size_t n : kSizes) {
        CAPTURE(n);
        check_bitwise_equivalence([&] {
            std::vector<double> out(n + 1, -1.0);
            fill_unit(base, 5, n, out.data());
            return out;
        });
        check_bitwise_equivalence([&] {
            std::vector<double> out(n + 1, -1.0);
            fill_exponential(base, 11, n, out.data());
            return out;
        });
        for (int shape : {1, 2, 3, 8}) {
            check_bitwise_equivalence([&] {
                std::vector<double> out(n + 1, -1.0);
                fill_erlang(base, 2, shape, 0.37, n, out.data());
                return out;
            });
        }
        // array math on shared pseudo-random inputs
        std::vector<double> x(n), y(n);
        fill_exponential(base, 1000, n, x.data());
        fill_exponential(base, 2000, n, y.data());
        check_bitwise_equivalence([&] {
            std::vector<double> out(n + 1, -1.0);
            sinr(31.6, x.data(), 15.0, y.data(), 1e-9, n, out.data());
            return out;
        });
        check_bitwise_equivalence([&] {
            std::vector<double> out(n + 1, -1.0);
            scaled_ratio(2.5, x.data(), y.data(), n, out.data());
            return out;
        });
        check_bitwise_equivalence([&] {
            std::vector<double> out(n + 1, -1.0);
            axpb(31.6, x.data(), 1e-9, n, out.data());
            return out;
        });
        check_bitwise_equivalence([&] {
            std::vector<double> out = x;
            out.push_back(-1.0);
            min_inplace(out.data(), y.data(), n);
            return out;
        });
        if (have_avx2() && n > 0) {
            force_isa(Isa::scalar);
            const std::size_t c1 = count_le(x.data(), 0.9, n);
            force_isa(Isa::avx2);
            const std::size_t c2 = count_le(x.data(), 0.9, n);
            force_isa(Isa::scalar);
            CHECK(c1 == c2);
        }
    }
}

TEST_CASE("erlang draws have the right first two moments") {
    const std::size_t n = 1u << 20;
    std::vector<double> v(n);
    const std::uint64_t base = CounterStream::derive(2024, 9).base;
    const int shape = 4;
    const double scale = 0.75;  // Gamma(4, 0.75): mean 3, variance 2.25
    fill_erlang(base, 0, shape, scale, n, v.data());
    double mean = 0.0;
    for (const double d : v) mean += d;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const double d : v) var += (d - mean) * (d - mean);
    var /= static_cast<double>(n - 1);
    CHECK(mean == doctest::Approx(3.0).epsilon(0.01 / 3.0));
    CHECK(var == doctest::Approx(2.25).epsilon(0.05 / 2.25));
}

TEST_CASE("count_le") {
    const std::vector<double> v = {0.1, 0.5, 0.5, 0.9, 2.0};
    CHECK(count_le(v.data(), 0.5, v.size()) == 3);
    CHECK(count_le(v.data(), 0.0, v.size()) == 0);
    CHECK(count_le(v.data(), 10.0, v.size()) == 5);
}
