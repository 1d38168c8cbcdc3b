#pragma once

#include <cstddef>
#include <cstdint>

namespace cogrelay::kernels {

struct Backend {
    void (*fill_unit)(std::uint64_t, std::uint64_t, std::size_t, double*);
    void (*fill_exponential)(std::uint64_t, std::uint64_t, std::size_t, double*);
    void (*fill_erlang)(std::uint64_t, std::uint64_t, int, double, std::size_t, double*);
    void (*sinr)(double, const double*, double, const double*, double, std::size_t, double*);
    void (*scaled_ratio)(double, const double*, const double*, std::size_t, double*);
    void (*axpb)(double, const double*, double, std::size_t, double*);
    void (*min_inplace)(double*, const double*, std::size_t);
    std::size_t (*count_le)(const double*, double, std::size_t);
};

const Backend& scalar_backend();
const Backend& avx2_backend();  // only callable when the CPU supports AVX2

}  // namespace cogrelay::kernels
