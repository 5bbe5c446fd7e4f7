// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string_view>

#include "wavevol/simd/kernels.hpp"

namespace wavevol::simd {
namespace {

struct KernelTable {
  Isa isa;
  double (*sum_squares)(const double*, std::size_t) noexcept;
  double (*sum_fourth)(const double*, std::size_t) noexcept;
  double (*dot)(const double*, const double*, std::size_t) noexcept;
  double (*abs_dot)(const double*, const double*, std::size_t) noexcept;
  void (*axpy)(double, const double*, double*, std::size_t) noexcept;
};

constexpr KernelTable kScalar{Isa::scalar, &scalar::sum_squares, &scalar::sum_fourth,
                              &scalar::dot, &scalar::abs_dot, &scalar::axpy};
#if defined(WAVEVOL_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::sum_squares, &avx2::sum_fourth,
                            &avx2::dot, &avx2::abs_dot, &avx2::axpy};
#endif

const KernelTable* table_for(Isa isa) noexcept {
#if defined(WAVEVOL_HAVE_AVX2)
  if (isa == Isa::avx2 && avx2_supported()) return &kAvx2;
#endif
  (void)isa;
  return &kScalar;
}

const KernelTable* initial_table() noexcept {
  if (const char* env = std::getenv("WAVEVOL_SIMD")) {
    if (std::string_view(env) == "scalar") return &kScalar;
  }
  return table_for(Isa::avx2);
}

std::atomic<const KernelTable*>& active() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

const KernelTable& kernels() noexcept { return *active().load(std::memory_order_relaxed); }

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool avx2_supported() noexcept {
#if defined(WAVEVOL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() noexcept { return kernels().isa; }

Isa select_isa(Isa isa) noexcept {
  const KernelTable* t = table_for(isa);
  active().store(t, std::memory_order_relaxed);
  return t->isa;
}

double sum_squares(std::span<const double> x) noexcept {
  return kernels().sum_squares(x.data(), x.size());
}

double sum_fourth(std::span<const double> x) noexcept {
  return kernels().sum_fourth(x.data(), x.size());
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return kernels().dot(a.data(), b.data(), std::min(a.size(), b.size()));
}

double abs_dot(std::span<const double> a, std::span<const double> b) noexcept {
  return kernels().abs_dot(a.data(), b.data(), std::min(a.size(), b.size()));
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  kernels().axpy(alpha, x.data(), y.data(), std::min(x.size(), y.size()));
}

}  // namespace wavevol::simd
