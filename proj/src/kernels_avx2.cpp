// AVX2 variants of the batch kernels. Compiled with -mavx2 in its own
// translation unit; only reached through runtime dispatch. Each kernel
// mirrors the scalar core's operation sequence so results are bit-identical
// (no FMA anywhere, contraction disabled project-wide).

#include <immintrin.h>

#include "cogrelay/kernels.hpp"
#include "kernels_backend.hpp"
#include "kernels_impl.hpp"

namespace cogrelay::kernels {

namespace {

using namespace detail;

// 64x64 -> low 64 multiply from 32-bit partial products.
inline __m256i mullo64(__m256i a, __m256i b) {
    const __m256i lo = _mm256_mul_epu32(a, b);
    const __m256i ahi = _mm256_srli_epi64(a, 32);
    const __m256i bhi = _mm256_srli_epi64(b, 32);
    const __m256i cross =
        _mm256_add_epi64(_mm256_mul_epu32(ahi, b), _mm256_mul_epu32(a, bhi));
    return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix64_vec(__m256i z) {
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
    z = mullo64(z, _mm256_set1_epi64x(static_cast<long long>(kMul1)));
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
    z = mullo64(z, _mm256_set1_epi64x(static_cast<long long>(kMul2)));
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
    return z;
}

inline __m256i stream_word_vec(std::uint64_t base, __m256i counters) {
    const __m256i state = _mm256_add_epi64(
        _mm256_set1_epi64x(static_cast<long long>(base)),
        mullo64(counters, _mm256_set1_epi64x(static_cast<long long>(kGamma))));
    return mix64_vec(state);
}

// Exact small-integer u64 -> double conversion via the 2^52 bias trick.
// Valid for values < 2^52.
inline __m256d u64_to_double(__m256i v) {
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
    return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic)), _mm256_set1_pd(0x1.0p52));
}

inline __m256d word_to_unit_vec(__m256i w) {
    const __m256d d = u64_to_double(_mm256_srli_epi64(w, 12));
    return _mm256_mul_pd(_mm256_add_pd(d, _mm256_set1_pd(0.5)), _mm256_set1_pd(0x1.0p-52));
}

inline __m256d log_positive_vec(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i ebias = _mm256_srli_epi64(bits, 52);
    const __m256i mbits = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
        _mm256_set1_epi64x(0x3FF0000000000000LL));
    const __m256d m = _mm256_castsi256_pd(mbits);

    const __m256d fold = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
    const __m256d mm = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), fold);
    __m256d e = _mm256_sub_pd(u64_to_double(ebias), _mm256_set1_pd(1023.0));
    e = _mm256_add_pd(e, _mm256_and_pd(fold, _mm256_set1_pd(1.0)));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(mm, one), _mm256_add_pd(mm, one));
    const __m256d z = _mm256_mul_pd(s, s);

    __m256d q = _mm256_set1_pd(kLogC21);
    q = _mm256_add_pd(_mm256_mul_pd(q, z), _mm256_set1_pd(kLogC19));
    q = _mm256_add_pd(_mm256_mul_pd(q, z), _mm256_set1_pd(kLogC17));
    q = _mm256_add_pd(_mm256_mul_pd(q, z), _mm256_set1_pd(kLogC15));
    q = _mm256_add_pd(_mm256_mul_pd(q, z), _mm256_set1_pd(kLogC13));
    q = _mm256_add_pd(_mm256_mul_pd(q, z), _mm256_set1_pd(kLogC11));
    q = _mm256_add_pd(_mm256_mul_pd(q, z), _mm256_set1_pd(kLogC9));
    q = _mm256_add_pd(_mm256_mul_pd(q, z), _mm256_set1_pd(kLogC7));
    q = _mm256_add_pd(_mm256_mul_pd(q, z), _mm256_set1_pd(kLogC5));
    q = _mm256_add_pd(_mm256_mul_pd(q, z), _mm256_set1_pd(kLogC3));
    const __m256d t = _mm256_add_pd(_mm256_mul_pd(q, z), one);
    const __m256d r = _mm256_mul_pd(s, t);
    const __m256d r2 = _mm256_add_pd(r, r);

    const __m256d lo = _mm256_add_pd(_mm256_mul_pd(e, _mm256_set1_pd(kLn2Lo)), r2);
    return _mm256_add_pd(_mm256_mul_pd(e, _mm256_set1_pd(kLn2Hi)), lo);
}

inline __m256d exponential_from_word_vec(__m256i w) {
    const __m256d zero = _mm256_setzero_pd();
    return _mm256_sub_pd(zero, log_positive_vec(word_to_unit_vec(w)));
}

inline __m256i counter_vec(std::uint64_t start, std::uint64_t stride) {
    return _mm256_add_epi64(
        _mm256_set1_epi64x(static_cast<long long>(start)),
        _mm256_set_epi64x(static_cast<long long>(3 * stride), static_cast<long long>(2 * stride),
                          static_cast<long long>(stride), 0));
}

void fill_unit_avx2(std::uint64_t base, std::uint64_t start, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i c = counter_vec(start + i, 1);
        _mm256_storeu_pd(out + i, word_to_unit_vec(stream_word_vec(base, c)));
    }
    fill_unit_scalar(base, start + i, n - i, out + i);
}

void fill_exponential_avx2(std::uint64_t base, std::uint64_t start, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i c = counter_vec(start + i, 1);
        _mm256_storeu_pd(out + i, exponential_from_word_vec(stream_word_vec(base, c)));
    }
    fill_exponential_scalar(base, start + i, n - i, out + i);
}

void fill_erlang_avx2(std::uint64_t base, std::uint64_t start, int shape, double scale,
                      std::size_t n, double* out) {
    const auto ushape = static_cast<std::uint64_t>(shape);
    const __m256d vscale = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i c = counter_vec(start + i * ushape, ushape);
        __m256d acc = exponential_from_word_vec(stream_word_vec(base, c));
        for (int j = 1; j < shape; ++j) {
            c = _mm256_add_epi64(c, _mm256_set1_epi64x(1));
            acc = _mm256_add_pd(acc, exponential_from_word_vec(stream_word_vec(base, c)));
        }
        _mm256_storeu_pd(out + i, _mm256_mul_pd(acc, vscale));
    }
    fill_erlang_scalar(base, start + i * ushape, shape, scale, n - i, out + i);
}

void sinr_avx2(double p_sig, const double* g_sig, double p_int, const double* g_int, double n0,
               std::size_t n, double* out) {
    const __m256d vps = _mm256_set1_pd(p_sig);
    const __m256d vpi = _mm256_set1_pd(p_int);
    const __m256d vn0 = _mm256_set1_pd(n0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d den =
            _mm256_add_pd(_mm256_mul_pd(vpi, _mm256_loadu_pd(g_int + i)), vn0);
        const __m256d num = _mm256_mul_pd(vps, _mm256_loadu_pd(g_sig + i));
        _mm256_storeu_pd(out + i, _mm256_div_pd(num, den));
    }
    sinr_scalar(p_sig, g_sig + i, p_int, g_int + i, n0, n - i, out + i);
}

void scaled_ratio_avx2(double scale, const double* num, const double* den, std::size_t n,
                       double* out) {
    const __m256d vs = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_mul_pd(vs, _mm256_loadu_pd(num + i));
        _mm256_storeu_pd(out + i, _mm256_div_pd(v, _mm256_loadu_pd(den + i)));
    }
    scaled_ratio_scalar(scale, num + i, den + i, n - i, out + i);
}

void axpb_avx2(double a, const double* x, double b, std::size_t n, double* out) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i,
                         _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)), vb));
    }
    axpb_scalar(a, x + i, b, n - i, out + i);
}

void min_inplace_avx2(double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // _mm256_min_pd(x, y) = (x < y) ? x : y, matching the scalar core.
        _mm256_storeu_pd(a + i, _mm256_min_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    min_inplace_scalar(a + i, b + i, n - i);
}

std::size_t count_le_avx2(const double* x, double threshold, std::size_t n) {
    const __m256d vt = _mm256_set1_pd(threshold);
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(x + i), vt, _CMP_LE_OQ);
        c += static_cast<std::size_t>(_mm_popcnt_u32(
            static_cast<unsigned>(_mm256_movemask_pd(cmp))));
    }
    return c + count_le_scalar(x + i, threshold, n - i);
}

}  // namespace

const Backend& avx2_backend() {
    static const Backend b{
        &fill_unit_avx2, &fill_exponential_avx2, &fill_erlang_avx2, &sinr_avx2,
        &scaled_ratio_avx2, &axpb_avx2, &min_inplace_avx2, &count_le_avx2,
    };
    return b;
}

}  // namespace cogrelay::kernels
