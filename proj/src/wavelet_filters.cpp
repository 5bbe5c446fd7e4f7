// SPDX-License-Identifier: Apache-2.0
#include "wavevol/wavelet_filters.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>

#include "wavevol/error.hpp"

namespace wavevol {
namespace {

std::vector<double> upsample(std::span<const double> taps, std::size_t factor) {
  std::vector<double> out((taps.size() - 1) * factor + 1, 0.0);
  for (std::size_t l = 0; l < taps.size(); ++l) out[l * factor] = taps[l];
  return out;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  }
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

int WaveletSpec::length() const {
  switch (family) {
    case WaveletFamily::haar: return 2;
    case WaveletFamily::d4: return 4;
  }
  throw Error(ErrorCode::unsupported_family, "unknown wavelet family");
}

std::string WaveletSpec::name() const {
  return family == WaveletFamily::haar ? "haar" : "D4";
}

WaveletSpec WaveletSpec::from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "haar" || lower == "d2") return haar();
  if (lower == "d4") return d4();
  throw Error(ErrorCode::unsupported_family, "wavelet '" + std::string(name) + "'");
}

std::size_t level_width(int base_length, int level) {
  return ((std::size_t{1} << level) - 1) * static_cast<std::size_t>(base_length - 1) + 1;
}

int max_level(std::size_t n) {
  return n == 0 ? 0 : static_cast<int>(std::bit_width(n)) - 1;
}

ModwtFilter base_filter(WaveletSpec spec) {
  ModwtFilter f;
  f.spec = spec;
  f.level = 1;
  switch (spec.family) {
    case WaveletFamily::haar:
      f.scaling = {0.5, 0.5};
      break;
    case WaveletFamily::d4: {
      const double s3 = std::numbers::sqrt3;
      // DWT taps (1±√3, 3±√3)/(4√2) divided by √2 for the MODWT.
      f.scaling = {(1.0 + s3) / 8.0, (3.0 + s3) / 8.0, (3.0 - s3) / 8.0, (1.0 - s3) / 8.0};
      break;
    }
    default:
      throw Error(ErrorCode::unsupported_family, "unknown wavelet family");
  }
  const std::size_t L = f.scaling.size();
  f.wavelet.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    f.wavelet[l] = sign * f.scaling[L - 1 - l];
  }
  return f;
}

ModwtFilter level_filter(const ModwtFilter& base, int level) {
  if (level < 1) throw Error(ErrorCode::level_too_deep, "level must be >= 1");
  if (base.level != 1) throw Error(ErrorCode::invalid_config, "level_filter expects a level-1 base");
  if (level == 1) return base;

  std::vector<double> lowpass{1.0};
  for (int l = 0; l <= level - 2; ++l) {
    lowpass = convolve(lowpass, upsample(base.scaling, std::size_t{1} << l));
  }
  const std::size_t stride = std::size_t{1} << (level - 1);
  ModwtFilter out;
  out.spec = base.spec;
  out.level = level;
  out.wavelet = convolve(lowpass, upsample(base.wavelet, stride));
  out.scaling = convolve(lowpass, upsample(base.scaling, stride));
  return out;
}

double squared_gain(std::span<const double> taps, double f) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t l = 0; l < taps.size(); ++l) {
    const double phase = -2.0 * std::numbers::pi * f * static_cast<double>(l);
    acc += taps[l] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return std::norm(acc);
}

double wavelet_gain(const ModwtFilter& filter, double f) { return squared_gain(filter.wavelet, f); }

double scaling_gain(const ModwtFilter& filter, double f) { return squared_gain(filter.scaling, f); }

double closed_form_wavelet_gain(WaveletSpec spec, double f) {
  const int L = spec.length();
  const double s = std::sin(std::numbers::pi * f);
  const double c = std::cos(std::numbers::pi * f);
  double sum = 0.0;
  for (int l = 0; l < L / 2; ++l) sum += binomial(L / 2 - 1 + l, l) * std::pow(c, 2 * l);
  // DWT gain 2 sin^L(πf) Σ..., halved by the MODWT rescaling.
  return std::pow(s, L) * sum;
}

double closed_form_scaling_gain(WaveletSpec spec, double f) {
  return closed_form_wavelet_gain(spec, 0.5 - f);
}

std::vector<double> periodize(std::span<const double> taps, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t l = 0; l < taps.size(); ++l) out[l % n] += taps[l];
  return out;
}

}  // namespace wavevol
