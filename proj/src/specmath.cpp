#include "cogrelay/specmath.hpp"

#include <array>
#include <cmath>
#include <string>

namespace cogrelay::specmath {

namespace {

// exp(-x) * sum_{k<a} x^k/k!, the survival function of an Erlang(a) variate.
double erlang_survival(int a, double x) {
    if (a < 1) {
        throw std::domain_error("incomplete gamma: order must be a positive integer, got " +
                                std::to_string(a));
    }
    if (x < 0.0 || std::isnan(x)) {
        throw std::domain_error("incomplete gamma: x must be nonnegative");
    }
    CompensatedSum s;
    double term = 1.0;
    s.add(term);
    for (int k = 1; k < a; ++k) {
        term *= x / static_cast<double>(k);
        s.add(term);
    }
    double q = std::exp(-x) * s.value();
    if (q > 1.0) q = 1.0;
    if (q < 0.0) q = 0.0;
    return q;
}

}  // namespace

double regularized_upper_gamma(int a, double x) { return erlang_survival(a, x); }

double regularized_lower_gamma(int a, double x) { return 1.0 - erlang_survival(a, x); }

std::uint64_t binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n) {
        throw std::domain_error("binomial: need 0 <= k <= n");
    }
    if (n > 62) {
        throw std::overflow_error("binomial: exact evaluation limited to n <= 62, got n = " +
                                  std::to_string(n));
    }
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n-k+i) stays below 2^64 for n <= 62; the division is exact.
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

double log_factorial(int n) {
    if (n < 0) {
        throw std::domain_error("log_factorial: n must be nonnegative");
    }
    static const std::array<double, 257> table = [] {
        std::array<double, 257> t{};
        for (int i = 0; i < 257; ++i) t[i] = std::lgamma(static_cast<double>(i) + 1.0);
        return t;
    }();
    if (n < static_cast<int>(table.size())) return table[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace cogrelay::specmath
