#include "cogrelay/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_backend.hpp"
#include "kernels_impl.hpp"

namespace cogrelay::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Isa detect_isa() {
    if (const char* env = std::getenv("COGRELAY_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!cpu_has_avx2()) {
                throw std::runtime_error("COGRELAY_KERNELS=avx2 but the CPU lacks AVX2");
            }
            return Isa::avx2;
        }
        // anything else (incl. "auto") falls through to detection
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<const Backend*> g_backend{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

const Backend& backend() {
    const Backend* b = g_backend.load(std::memory_order_acquire);
    if (!b) {
        const Isa isa = detect_isa();
        b = (isa == Isa::avx2) ? &avx2_backend() : &scalar_backend();
        g_isa.store(isa, std::memory_order_relaxed);
        g_backend.store(b, std::memory_order_release);
    }
    return *b;
}

}  // namespace

Isa active_isa() {
    backend();
    return g_isa.load(std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool cpu_supports(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

void force_isa(Isa isa) {
    if (!cpu_supports(isa)) {
        throw std::runtime_error("requested kernel ISA not supported on this CPU");
    }
    g_backend.store(isa == Isa::avx2 ? &avx2_backend() : &scalar_backend(),
                    std::memory_order_release);
    g_isa.store(isa, std::memory_order_relaxed);
}

std::uint64_t mix64(std::uint64_t z) { return detail::mix64_core(z); }

double word_to_unit(std::uint64_t w) { return detail::word_to_unit_core(w); }

double log_positive(double x) { return detail::log_positive_core(x); }

CounterStream CounterStream::derive(std::uint64_t seed, std::uint64_t tag) {
    return CounterStream{detail::mix64_core(seed ^ detail::mix64_core(tag + kGamma)), 0};
}

std::uint64_t CounterStream::next_u64() { return detail::stream_word(base, counter++); }

double CounterStream::next_unit() { return detail::word_to_unit_core(next_u64()); }

double CounterStream::next_exponential() { return detail::exponential_from_word(next_u64()); }

double CounterStream::next_erlang(int shape, double scale) {
    double out = 0.0;
    detail::fill_erlang_scalar(base, counter, shape, scale, 1, &out);
    counter += static_cast<std::uint64_t>(shape);
    return out;
}

void fill_unit(std::uint64_t base, std::uint64_t start, std::size_t n, double* out) {
    backend().fill_unit(base, start, n, out);
}

void fill_exponential(std::uint64_t base, std::uint64_t start, std::size_t n, double* out) {
    backend().fill_exponential(base, start, n, out);
}

void fill_erlang(std::uint64_t base, std::uint64_t start, int shape, double scale, std::size_t n,
                 double* out) {
    if (shape < 1) throw std::invalid_argument("fill_erlang: shape must be >= 1");
    backend().fill_erlang(base, start, shape, scale, n, out);
}

void sinr(double p_sig, const double* g_sig, double p_int, const double* g_int, double n0,
          std::size_t n, double* out) {
    backend().sinr(p_sig, g_sig, p_int, g_int, n0, n, out);
}

void scaled_ratio(double scale, const double* num, const double* den, std::size_t n, double* out) {
    backend().scaled_ratio(scale, num, den, n, out);
}

void axpb(double a, const double* x, double b, std::size_t n, double* out) {
    backend().axpb(a, x, b, n, out);
}

void min_inplace(double* a, const double* b, std::size_t n) { backend().min_inplace(a, b, n); }

std::size_t count_le(const double* x, double threshold, std::size_t n) {
    return backend().count_le(x, threshold, n);
}

}  // namespace cogrelay::kernels
