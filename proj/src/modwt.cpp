// SPDX-License-Identifier: Apache-2.0
#include "wavevol/modwt.hpp"

#include <algorithm>
#include <string>

#include "wavevol/error.hpp"
#include "wavevol/simd/kernels.hpp"

namespace wavevol {
namespace {

void validate(std::size_t n, WaveletSpec spec, int levels) {
  if (levels < 1) throw Error(ErrorCode::level_too_deep, "levels must be >= 1");
  if (levels > max_level(n)) {
    throw Error(ErrorCode::level_too_deep, "J=" + std::to_string(levels) + " exceeds log2(N) for N=" +
                                               std::to_string(n));
  }
  // Levels wider than N use the periodized filter; only the base filter
  // must fit.
  const auto base_length = static_cast<std::size_t>(spec.length());
  if (n < base_length) {
    throw Error(ErrorCode::series_too_short,
                "N=" + std::to_string(n) + " < L=" + std::to_string(base_length));
  }
}

// out[t] = Σ_l taps[l] * in[(t - stride*l) mod N], as two contiguous axpy
// runs per tap.
void circular_filter(std::span<const double> taps, std::size_t stride, std::span<const double> in,
                     std::span<double> out) {
  const std::size_t n = in.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t l = 0; l < taps.size(); ++l) {
    const std::size_t shift = (stride * l) % n;
    simd::axpy(taps[l], in.first(n - shift), out.subspan(shift));
    if (shift > 0) simd::axpy(taps[l], in.subspan(n - shift), out.first(shift));
  }
}

std::vector<std::size_t> boundary_counts(WaveletSpec spec, int levels) {
  std::vector<std::size_t> counts;
  for (int j = 1; j <= levels; ++j) counts.push_back(level_width(spec.length(), j) - 1);
  return counts;
}

}  // namespace

ModwtDecomposition transform(std::span<const double> x, WaveletSpec spec, int levels) {
  validate(x.size(), spec, levels);
  const ModwtFilter base = base_filter(spec);
  const std::size_t n = x.size();

  ModwtDecomposition d;
  d.spec = spec;
  d.levels = levels;
  d.boundary_counts = boundary_counts(spec, levels);
  d.wavelet.assign(static_cast<std::size_t>(levels), std::vector<double>(n));

  std::vector<double> current(x.begin(), x.end());
  std::vector<double> next(n);
  for (int j = 1; j <= levels; ++j) {
    const std::size_t stride = std::size_t{1} << (j - 1);
    circular_filter(base.wavelet, stride, current, d.wavelet[static_cast<std::size_t>(j - 1)]);
    circular_filter(base.scaling, stride, current, next);
    current.swap(next);
  }
  d.scaling = std::move(current);
  return d;
}

ModwtDecomposition transform_direct(std::span<const double> x, WaveletSpec spec, int levels) {
  validate(x.size(), spec, levels);
  const ModwtFilter base = base_filter(spec);
  const std::size_t n = x.size();

  auto convolve = [&](const std::vector<double>& taps) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t l = 0; l < taps.size(); ++l) acc += taps[l] * x[(i + n - l % n) % n];
      out[i] = acc;
    }
    return out;
  };

  ModwtDecomposition d;
  d.spec = spec;
  d.levels = levels;
  d.boundary_counts = boundary_counts(spec, levels);
  for (int j = 1; j <= levels; ++j) {
    const ModwtFilter f = level_filter(base, j);
    d.wavelet.push_back(convolve(f.wavelet));
    if (j == levels) d.scaling = convolve(f.scaling);
  }
  return d;
}

std::vector<double> level1_wavelet(std::span<const double> x, WaveletSpec spec) {
  validate(x.size(), spec, 1);
  const ModwtFilter base = base_filter(spec);
  std::vector<double> out(x.size());
  circular_filter(base.wavelet, 1, x, out);
  return out;
}

std::vector<double> energy_by_scale(const ModwtDecomposition& d) {
  std::vector<double> energy;
  energy.reserve(d.wavelet.size() + 1);
  for (const auto& w : d.wavelet) energy.push_back(simd::sum_squares(w));
  energy.push_back(simd::sum_squares(d.scaling));
  return energy;
}

double wavelet_variance(const ModwtDecomposition& d, int level, VarianceMode mode) {
  if (level < 1 || level > d.levels) {
    throw Error(ErrorCode::level_too_deep, "level " + std::to_string(level) + " not in decomposition");
  }
  const auto& w = d.wavelet[static_cast<std::size_t>(level - 1)];
  const std::size_t n = w.size();
  if (mode == VarianceMode::biased) return simd::sum_squares(w) / static_cast<double>(n);

  const std::size_t width = level_width(d.spec.length(), level);
  if (width > n) {
    throw Error(ErrorCode::insufficient_coefficients,
                "M_j = N - L_j + 1 <= 0 at level " + std::to_string(level));
  }
  const std::size_t m = n - width + 1;
  return simd::sum_squares(std::span<const double>(w).subspan(width - 1)) / static_cast<double>(m);
}

}  // namespace wavevol
