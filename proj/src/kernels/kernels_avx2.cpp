#include <immintrin.h>

#include "kernels_internal.hpp"

namespace rplan::kernels::detail {
namespace {

// (l0 + l1) + (l2 + l3), matching the scalar reference.
inline double reduce_lanes(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const std::size_t n4 = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) {
    const double prod = a * x[i];
    y[i] = y[i] + prod;
  }
}

double axpy_norm2_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    const __m256d v = _mm256_add_pd(_mm256_loadu_pd(y + i), prod);
    _mm256_storeu_pd(y + i, v);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double sum = reduce_lanes(acc);
  for (; i < n; ++i) {
    const double prod = a * x[i];
    const double v = y[i] + prod;
    y[i] = v;
    const double sq = v * v;
    sum = sum + sq;
  }
  return sum;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d prod =
        _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, prod);
  }
  double sum = reduce_lanes(acc);
  for (; i < n; ++i) {
    const double prod = x[i] * y[i];
    sum = sum + prod;
  }
  return sum;
}

void scale_avx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const std::size_t n4 = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] = a * x[i];
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", axpy_avx2, axpy_norm2_avx2, dot_avx2,
                                 scale_avx2};
  return table;
}

}  // namespace rplan::kernels::detail
