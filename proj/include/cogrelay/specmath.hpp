#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace cogrelay::specmath {

// Regularized lower incomplete gamma P(a, x) for positive integer order a.
// Evaluated through the finite sum 1 - exp(-x) * sum_{k<a} x^k/k!, which is
// exact for integer a. Throws std::domain_error for a < 1 or x < 0.
double regularized_lower_gamma(int a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x). Both functions
// share the same finite sum, so P + Q == 1 holds bit-exactly.
double regularized_upper_gamma(int a, double x);

// Exact binomial coefficient. Exact for n <= 62; throws std::overflow_error
// beyond that instead of wrapping.
std::uint64_t binomial(int n, int k);

// ln(n!) via a lazily built lgamma table.
double log_factorial(int n);

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Accumulator for alternating-sign sums: positive and negative terms are kept
// in separate compensated buckets and subtracted once at the end, so the
// magnitude of cancellation can be inspected afterwards.
class SignedAccumulator {
public:
    void add(double magnitude, bool negative) {
        if (negative) {
            neg_.add(magnitude);
        } else {
            pos_.add(magnitude);
        }
    }
    double value() const { return pos_.value() - neg_.value(); }
    double magnitude_sum() const { return pos_.value() + neg_.value(); }

    // True when the result has lost more than `rel` of the term mass to
    // cancellation, i.e. |value| < rel * magnitude_sum.
    bool cancellation_exceeds(double rel) const {
        return std::abs(value()) < rel * magnitude_sum();
    }

private:
    CompensatedSum pos_;
    CompensatedSum neg_;
};

}  // namespace cogrelay::specmath
