#pragma once

#include "ehsense/kernels.hpp"

namespace ehsense::kernels::detail {

const KernelTable& scalar_table();
#if defined(EHSENSE_BUILD_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace ehsense::kernels::detail
