// SPDX-License-Identifier: Apache-2.0
#pragma once

// Arithmetic inner loops shared by the transform and the estimators. Each
// kernel has a scalar reference and an AVX2 variant; the variant is chosen
// once at runtime from CPUID (override with WAVEVOL_SIMD=scalar|avx2).
// Variants agree to rounding (reassociated sums), not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace wavevol::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

bool avx2_supported() noexcept;
Isa active_isa() noexcept;
/// Switch the dispatch table (tests and benchmarks); falls back to scalar
/// when the requested ISA is not available.
Isa select_isa(Isa isa) noexcept;

double sum_squares(std::span<const double> x) noexcept;
double sum_fourth(std::span<const double> x) noexcept;
/// Σ a_i b_i over min(|a|, |b|) terms.
double dot(std::span<const double> a, std::span<const double> b) noexcept;
/// Σ |a_i| |b_i| over min(|a|, |b|) terms.
double abs_dot(std::span<const double> a, std::span<const double> b) noexcept;
/// y += alpha * x over min(|x|, |y|) terms.
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;

namespace scalar {
double sum_squares(const double* x, std::size_t n) noexcept;
double sum_fourth(const double* x, std::size_t n) noexcept;
double dot(const double* a, const double* b, std::size_t n) noexcept;
double abs_dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
}  // namespace scalar

#if defined(WAVEVOL_HAVE_AVX2)
namespace avx2 {
double sum_squares(const double* x, std::size_t n) noexcept;
double sum_fourth(const double* x, std::size_t n) noexcept;
double dot(const double* a, const double* b, std::size_t n) noexcept;
double abs_dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
}  // namespace avx2
#endif

}  // namespace wavevol::simd
