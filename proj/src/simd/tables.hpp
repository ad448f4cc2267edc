#pragma once

#include "qssmm/simd/kernels.hpp"

namespace qssmm::simd::detail {

#if defined(QSSMM_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace qssmm::simd::detail
