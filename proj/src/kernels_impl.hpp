#pragma once

// Scalar cores shared by the reference backend and the tail handling of the
// SIMD backends. The SIMD variants mirror these operation sequences exactly;
// any change here is a change to the contract the equivalence tests pin down.

#include <bit>
#include <cstddef>
#include <cstdint>

namespace cogrelay::kernels::detail {

inline constexpr std::uint64_t kMul1 = 0xBF58476D1CE4E5B9ull;
inline constexpr std::uint64_t kMul2 = 0x94D049BB133111EBull;

inline std::uint64_t mix64_core(std::uint64_t z) {
    z ^= z >> 30;
    z *= kMul1;
    z ^= z >> 27;
    z *= kMul2;
    z ^= z >> 31;
    return z;
}

// Exact arithmetic: (w>>12) < 2^52, so every step rounds nothing.
inline double word_to_unit_core(std::uint64_t w) {
    return (static_cast<double>(w >> 12) + 0.5) * 0x1.0p-52;
}

// ln2 split with a 27-bit high part so that e*kLn2Hi is exact for |e| < 2^26.
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kSqrt2 = 1.41421356237309514547;  // nearest double above sqrt(2)

// atanh-series coefficients 1/3, 1/5, ..., 1/21 (Horner order, highest first).
inline constexpr double kLogC21 = 1.0 / 21.0;
inline constexpr double kLogC19 = 1.0 / 19.0;
inline constexpr double kLogC17 = 1.0 / 17.0;
inline constexpr double kLogC15 = 1.0 / 15.0;
inline constexpr double kLogC13 = 1.0 / 13.0;
inline constexpr double kLogC11 = 1.0 / 11.0;
inline constexpr double kLogC9 = 1.0 / 9.0;
inline constexpr double kLogC7 = 1.0 / 7.0;
inline constexpr double kLogC5 = 1.0 / 5.0;
inline constexpr double kLogC3 = 1.0 / 3.0;

// log(x) for positive normal x: reduce to m in [sqrt2/2, sqrt2), then
// 2*atanh((m-1)/(m+1)) by series. Accurate to a few ulp on (0, 1].
inline double log_positive_core(double x) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    const std::int64_t ebias = static_cast<std::int64_t>(bits >> 52);
    const double m =
        std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull);
    const bool fold = m > kSqrt2;
    const double mm = fold ? m * 0.5 : m;
    const double e = static_cast<double>(ebias - 1023 + (fold ? 1 : 0));
    const double s = (mm - 1.0) / (mm + 1.0);
    const double z = s * s;
    double q = kLogC21;
    q = q * z + kLogC19;
    q = q * z + kLogC17;
    q = q * z + kLogC15;
    q = q * z + kLogC13;
    q = q * z + kLogC11;
    q = q * z + kLogC9;
    q = q * z + kLogC7;
    q = q * z + kLogC5;
    q = q * z + kLogC3;
    const double t = q * z + 1.0;
    const double r = s * t;
    const double r2 = r + r;
    return e * kLn2Hi + (e * kLn2Lo + r2);
}

inline double exponential_from_word(std::uint64_t w) {
    return -log_positive_core(word_to_unit_core(w));
}

inline std::uint64_t stream_word(std::uint64_t base, std::uint64_t counter) {
    return mix64_core(base + counter * 0x9E3779B97F4A7C15ull);
}

// --- scalar batch cores (also used for SIMD tails) ---

inline void fill_unit_scalar(std::uint64_t base, std::uint64_t start, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = word_to_unit_core(stream_word(base, start + i));
}

inline void fill_exponential_scalar(std::uint64_t base, std::uint64_t start, std::size_t n,
                                    double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = exponential_from_word(stream_word(base, start + i));
}

inline void fill_erlang_scalar(std::uint64_t base, std::uint64_t start, int shape, double scale,
                               std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t c0 = start + static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(shape);
        double acc = exponential_from_word(stream_word(base, c0));
        for (int j = 1; j < shape; ++j) {
            acc += exponential_from_word(stream_word(base, c0 + static_cast<std::uint64_t>(j)));
        }
        out[i] = acc * scale;
    }
}

inline void sinr_scalar(double p_sig, const double* g_sig, double p_int, const double* g_int,
                        double n0, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double den = p_int * g_int[i] + n0;
        out[i] = (p_sig * g_sig[i]) / den;
    }
}

inline void scaled_ratio_scalar(double scale, const double* num, const double* den, std::size_t n,
                                double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (scale * num[i]) / den[i];
}

inline void axpb_scalar(double a, const double* x, double b, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b;
}

inline void min_inplace_scalar(double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] = (a[i] < b[i]) ? a[i] : b[i];
}

inline std::size_t count_le_scalar(const double* x, double threshold, std::size_t n) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] <= threshold) ? 1u : 0u;
    return c;
}

}  // namespace cogrelay::kernels::detail
