#pragma once

// Dense double-precision kernels used by the simplex engine.
//
// Every variant must round exactly like the scalar reference: multiplies and
// adds are never fused, and reductions accumulate in four interleaved lanes
// (element i goes to lane i % 4, lanes are combined as (l0 + l1) + (l2 + l3),
// the tail is then added in order). This keeps solver runs bit-identical no
// matter which variant the dispatcher picks.

#include <cstddef>
#include <string_view>

namespace rplan::kernels {

struct KernelTable {
  const char* name;
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] += a * x[i], returns sum of the updated y[i]^2
  double (*axpy_norm2)(double a, const double* x, double* y, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*scale)(double a, double* x, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr if the variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

// Resolved once per process. RPLAN_KERNELS=scalar forces the reference.
const KernelTable& active_kernels();

// Overrides the process-wide choice; intended for tests and benchmarks.
void select_kernels(std::string_view name);

}  // namespace rplan::kernels
