#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace rplan::kernels {
namespace {

std::atomic<const KernelTable*> g_override{nullptr};

const KernelTable& resolve() {
  if (const char* env = std::getenv("RPLAN_KERNELS")) {
    if (std::string_view(env) == "scalar") return scalar_kernels();
  }
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(RPLAN_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  if (supported) return &detail::avx2_table();
#endif
  return nullptr;
}

const KernelTable& active_kernels() {
  if (const KernelTable* t = g_override.load(std::memory_order_acquire)) {
    return *t;
  }
  static const KernelTable& resolved = resolve();
  return resolved;
}

void select_kernels(std::string_view name) {
  if (name == "scalar") {
    g_override.store(&scalar_kernels(), std::memory_order_release);
  } else if (name == "avx2") {
    const KernelTable* t = avx2_kernels();
    if (t == nullptr) throw std::runtime_error("avx2 kernels unavailable");
    g_override.store(t, std::memory_order_release);
  } else if (name == "auto") {
    g_override.store(nullptr, std::memory_order_release);
  } else {
    throw std::invalid_argument("unknown kernel variant: " + std::string(name));
  }
}

}  // namespace rplan::kernels
