#pragma once

#include "rplan/kernels.hpp"

namespace rplan::kernels::detail {

// Defined in kernels_avx2.cpp when that translation unit is built.
const KernelTable& avx2_table();

}  // namespace rplan::kernels::detail
