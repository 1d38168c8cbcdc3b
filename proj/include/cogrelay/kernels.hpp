#pragma once

#include <cstddef>
#include <cstdint>

// Batch arithmetic kernels for the Monte Carlo hot loops: counter-based
// uniform/exponential/Erlang generation and SINR/outage array math.
//
// Every kernel exists as a scalar reference implementation and an AVX2
// variant selected at runtime. The two are bit-identical by construction:
// same operation sequence, no FMA, and a shared polynomial log instead of
// libm (the build disables FP contraction). Equivalence is asserted by the
// test suite on every kernel.

namespace cogrelay::kernels {

enum class Isa { scalar, avx2 };

// ISA selected for batch kernels. Defaults to the best supported one;
// the COGRELAY_KERNELS environment variable (scalar|avx2|auto) overrides.
Isa active_isa();
const char* isa_name(Isa isa);
bool cpu_supports(Isa isa);

// Force a specific ISA (throws std::runtime_error if unsupported).
void force_isa(Isa isa);

// SplitMix64 finalizer; word c of a stream with base b is mix64(b + c*kGamma).
std::uint64_t mix64(std::uint64_t z);
inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// Maps a random word to the open interval (0, 1): ((w >> 12) + 0.5) * 2^-52.
double word_to_unit(std::uint64_t w);

// Shared polynomial log for positive normal doubles (a few ulp; identical
// results in scalar and SIMD paths, unlike libm). Exposed for tests.
double log_positive(double x);

// A random-access counter stream. Streams derived from the same seed with
// distinct tags are statistically independent; any (seed, tag, counter)
// triple maps to one fixed word, so single draws and batch fills agree
// bit-for-bit regardless of batching.
struct CounterStream {
    std::uint64_t base = 0;
    std::uint64_t counter = 0;

    static CounterStream derive(std::uint64_t seed, std::uint64_t tag);

    std::uint64_t next_u64();
    double next_unit();         // in (0, 1)
    double next_exponential();  // mean 1, strictly positive
    // Sum of `shape` unit exponentials, times `scale`; consumes `shape` words.
    double next_erlang(int shape, double scale);
    void skip(std::uint64_t words) { counter += words; }
};

// --- batch kernels (dispatched) ---

// out[i] = unit(word(start + i))
void fill_unit(std::uint64_t base, std::uint64_t start, std::size_t n, double* out);

// out[i] = -log(unit(word(start + i)))
void fill_exponential(std::uint64_t base, std::uint64_t start, std::size_t n, double* out);

// out[i] = scale * sum_{j<shape} -log(unit(word(start + i*shape + j)))
void fill_erlang(std::uint64_t base, std::uint64_t start, int shape, double scale, std::size_t n,
                 double* out);

// out[i] = p_sig*g_sig[i] / (p_int*g_int[i] + n0)
void sinr(double p_sig, const double* g_sig, double p_int, const double* g_int, double n0,
          std::size_t n, double* out);

// out[i] = scale*num[i] / den[i]
void scaled_ratio(double scale, const double* num, const double* den, std::size_t n, double* out);

// out[i] = a*x[i] + b
void axpb(double a, const double* x, double b, std::size_t n, double* out);

// a[i] = min(a[i], b[i])
void min_inplace(double* a, const double* b, std::size_t n);

// number of i with x[i] <= threshold
std::size_t count_le(const double* x, double threshold, std::size_t n);

}  // namespace cogrelay::kernels
