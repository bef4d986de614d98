#include "kernels_internal.hpp"

namespace rplan::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double prod = a * x[i];
    y[i] = y[i] + prod;
  }
}

double axpy_norm2_scalar(double a, const double* x, double* y, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      const double prod = a * x[i + l];
      const double v = y[i + l] + prod;
      y[i + l] = v;
      const double sq = v * v;
      lane[l] = lane[l] + sq;
    }
  }
  double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) {
    const double prod = a * x[i];
    const double v = y[i] + prod;
    y[i] = v;
    const double sq = v * v;
    sum = sum + sq;
  }
  return sum;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      const double prod = x[i + l] * y[i + l];
      lane[l] = lane[l] + prod;
    }
  }
  double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) {
    const double prod = x[i] * y[i];
    sum = sum + prod;
  }
  return sum;
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = a * x[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", axpy_scalar, axpy_norm2_scalar,
                                 dot_scalar, scale_scalar};
  return table;
}

}  // namespace rplan::kernels
