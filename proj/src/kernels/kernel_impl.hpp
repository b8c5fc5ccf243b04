#pragma once

#include "wavewall/kernels.hpp"

namespace wavewall::kernels::detail {

#if defined(WAVEWALL_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(WAVEWALL_HAVE_NEON)
const KernelTable& neon_kernels() noexcept;
#endif

}  // namespace wavewall::kernels::detail
