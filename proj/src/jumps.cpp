// SPDX-License-Identifier: Apache-2.0
#include "wavevol/jumps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "wavevol/error.hpp"
#include "wavevol/modwt.hpp"

namespace wavevol {
namespace {

constexpr std::size_t kMinLength = 16;
constexpr double kMadToSigma = 0.6745;

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::size_t default_neighborhood(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)) / 4.0)));
}

std::size_t step_response_offset(WaveletSpec spec) {
  const ModwtFilter f = base_filter(spec);
  double partial = 0.0;
  double best = -1.0;
  std::size_t offset = 0;
  for (std::size_t m = 0; m < f.wavelet.size(); ++m) {
    partial += f.wavelet[m];
    if (std::fabs(partial) > best + 1e-15) {
      best = std::fabs(partial);
      offset = m;
    }
  }
  return offset;
}

JumpReport detect_jumps(std::span<const double> y, const JumpOptions& options) {
  const std::size_t n = y.size();
  if (n < kMinLength) {
    throw Error(ErrorCode::series_too_short, "jump detection needs n >= 16, got " + std::to_string(n));
  }
  const std::size_t delta = options.neighborhood.value_or(default_neighborhood(n));
  if (delta < 1) throw Error(ErrorCode::invalid_config, "neighborhood must be >= 1");

  std::vector<double> centered(y.begin(), y.end());
  for (double& v : centered) v -= y[0];
  const std::vector<double> w = level1_wavelet(centered, options.spec);
  const auto first = static_cast<std::size_t>(options.spec.length() - 1);

  std::vector<double> magnitudes;
  magnitudes.reserve(n - first);
  for (std::size_t k = first; k < n; ++k) magnitudes.push_back(std::fabs(w[k]));

  JumpReport report;
  report.neighborhood = delta;
  report.mad_scale = median(magnitudes) / kMadToSigma;
  if (options.threshold) {
    report.threshold = *options.threshold;
  } else {
    if (!(report.mad_scale > 0.0)) {
      throw Error(ErrorCode::degenerate_scale, "median |W1| is zero; path has no diffusive motion");
    }
    report.threshold = report.mad_scale * std::sqrt(2.0 * std::log(static_cast<double>(n)));
  }

  const std::size_t gap = static_cast<std::size_t>(options.spec.length() - 1);
  const std::size_t offset = step_response_offset(options.spec);
  std::size_t k = first;
  while (k < n) {
    if (std::fabs(w[k]) <= report.threshold) {
      ++k;
      continue;
    }
    std::size_t peak = k;
    std::size_t last = k;
    for (std::size_t i = k + 1; i < n && i <= last + gap; ++i) {
      if (std::fabs(w[i]) > report.threshold) {
        last = i;
        if (std::fabs(w[i]) > std::fabs(w[peak])) peak = i;
      }
    }
    const std::size_t tau = std::clamp<std::size_t>(peak >= offset ? peak - offset : 0, 1, n - 1);
    if (report.locations.empty() || report.locations.back() != tau) {
      const std::size_t post_end = std::min(n, tau + delta);
      const std::size_t pre_begin = tau >= delta ? tau - delta : 0;
      const double size = mean(y.subspan(tau, post_end - tau)) - mean(y.subspan(pre_begin, tau - pre_begin));
      report.locations.push_back(tau);
      report.sizes.push_back(size);
    }
    k = last + 1;
  }
  for (double s : report.sizes) report.jump_variation += s * s;
  return report;
}

std::vector<double> jump_adjust(std::span<const double> y, const JumpReport& report) {
  std::vector<double> out(y.begin(), y.end());
  for (std::size_t l = 0; l < report.count(); ++l) {
    const std::size_t tau = report.locations[l];
    if (tau >= out.size()) {
      throw Error(ErrorCode::location_out_of_range,
                  "jump at " + std::to_string(tau) + " beyond path of length " + std::to_string(out.size()));
    }
    for (std::size_t i = tau; i < out.size(); ++i) out[i] -= report.sizes[l];
  }
  return out;
}

void write_jumps_csv(std::ostream& out, std::string_view day, const JumpReport& report, bool header) {
  if (header) out << "day,grid_index,size,squared_size\n";
  const auto old_precision = out.precision(17);
  for (std::size_t l = 0; l < report.count(); ++l) {
    out << day << ',' << report.locations[l] << ',' << report.sizes[l] << ','
        << report.sizes[l] * report.sizes[l] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace wavevol
