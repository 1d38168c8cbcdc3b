#include "kernels_backend.hpp"
#include "kernels_impl.hpp"

namespace cogrelay::kernels {

const Backend& scalar_backend() {
    static const Backend b{
        &detail::fill_unit_scalar,    &detail::fill_exponential_scalar,
        &detail::fill_erlang_scalar,  &detail::sinr_scalar,
        &detail::scaled_ratio_scalar, &detail::axpb_scalar,
        &detail::min_inplace_scalar,  &detail::count_le_scalar,
    };
    return b;
}

}  // namespace cogrelay::kernels
