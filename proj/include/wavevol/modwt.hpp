// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wavevol/wavelet_filters.hpp"

namespace wavevol {

/// MODWT of one series: J wavelet vectors and the level-J scaling vector,
/// every one of length N. boundary_counts[j-1] = L_j - 1 coefficients at the
/// start of level j touch the circular boundary; they are kept.
struct ModwtDecomposition {
  WaveletSpec spec;
  int levels = 0;
  std::vector<std::vector<double>> wavelet;
  std::vector<double> scaling;
  std::vector<std::size_t> boundary_counts;

  std::size_t size() const { return scaling.size(); }
};

enum class VarianceMode { unbiased, biased };

/// Pyramid algorithm: level j is filtered from the level j-1 scaling
/// coefficients with taps upsampled by 2^{j-1}. Requires N >= L and
/// J <= floor(log2 N); levels with L_j > N behave as periodized filters.
ModwtDecomposition transform(std::span<const double> x, WaveletSpec spec, int levels);

/// Reference path: explicit level-j filters, direct O(N L_j) circular
/// convolution, scalar arithmetic only.
ModwtDecomposition transform_direct(std::span<const double> x, WaveletSpec spec, int levels);

/// Level-1 wavelet coefficients only (jump detection).
std::vector<double> level1_wavelet(std::span<const double> x, WaveletSpec spec);

/// (‖W̃_1‖², …, ‖W̃_J‖², ‖Ṽ_J‖²).
std::vector<double> energy_by_scale(const ModwtDecomposition& d);

/// unbiased: (1/M_j) Σ_{i >= L_j - 1} W̃²_{j,i} with M_j = N - L_j + 1;
/// biased: (1/N) Σ_i W̃²_{j,i}.
double wavelet_variance(const ModwtDecomposition& d, int level, VarianceMode mode);

}  // namespace wavevol
