// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavevol {

enum class WaveletFamily { haar, d4 };

/// Daubechies-family wavelet choice. Haar is D(2); D4 is the working family.
struct WaveletSpec {
  WaveletFamily family = WaveletFamily::d4;

  /// Base filter length L (2 for Haar, 4 for D4).
  int length() const;
  std::string name() const;

  static WaveletSpec haar() { return {WaveletFamily::haar}; }
  static WaveletSpec d4() { return {WaveletFamily::d4}; }
  /// Accepts "haar", "D2", "D4" (case-insensitive); unsupported-family otherwise.
  static WaveletSpec from_name(std::string_view name);
};

/// MODWT wavelet/scaling taps at one level.
///
/// Taps are stored in convolution orientation: coefficient i of the transform
/// is sum_l taps[l] * x[(i - l) mod N]. The wavelet filter is the quadrature
/// mirror of the scaling filter, h_l = (-1)^l g_{L-1-l}, so for D4 the level-1
/// DWT wavelet taps are ((1-√3), (-3+√3), (3+√3), (-1-√3)) / (4√2). MODWT taps
/// are the DWT taps divided by 2^{j/2}.
struct ModwtFilter {
  WaveletSpec spec;
  int level = 1;
  std::vector<double> wavelet;
  std::vector<double> scaling;

  std::size_t width() const { return wavelet.size(); }
};

/// L_j = (2^j - 1)(L - 1) + 1.
std::size_t level_width(int base_length, int level);

/// Deepest admissible level for a series of length n: floor(log2 n).
int max_level(std::size_t n);

ModwtFilter base_filter(WaveletSpec spec);

/// Level-j filter by the time-domain cascade: the level-1 wavelet filter
/// upsampled by 2^{j-1}, convolved with g̃ upsampled by 2^l for l < j-1.
ModwtFilter level_filter(const ModwtFilter& base, int level);

/// |Σ_l taps_l e^{-i2π f l}|².
double squared_gain(std::span<const double> taps, double f);
double wavelet_gain(const ModwtFilter& filter, double f);
double scaling_gain(const ModwtFilter& filter, double f);

/// Closed-form level-1 squared gains of the Daubechies D(L) filters after
/// MODWT rescaling: sin^L(πf) Σ_{l<L/2} C(L/2-1+l, l) cos^{2l}(πf), and the
/// scaling gain as its mirror at 1/2 - f.
double closed_form_wavelet_gain(WaveletSpec spec, double f);
double closed_form_scaling_gain(WaveletSpec spec, double f);

/// Wrap taps modulo n (periodized filter of length n).
std::vector<double> periodize(std::span<const double> taps, std::size_t n);

}  // namespace wavevol
