// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wavevol/wavelet_filters.hpp"

namespace wavevol {

/// Jumps found on one intraday log-price path.
///
/// locations[l] is the index of the first observation after jump l; sizes
/// are signed log-price steps. jump_variation is Σ sizes².
struct JumpReport {
  std::vector<std::size_t> locations;
  std::vector<double> sizes;
  double jump_variation = 0.0;
  double threshold = 0.0;
  double mad_scale = 0.0;
  std::size_t neighborhood = 0;

  std::size_t count() const { return locations.size(); }
};

struct JumpOptions {
  WaveletSpec spec = WaveletSpec::d4();
  /// Averaging half-window δ_n in grid points; default ⌈√n / 4⌉.
  std::optional<std::size_t> neighborhood;
  /// Reuse a previously computed threshold instead of d·√(2 log n).
  std::optional<double> threshold;
};

std::size_t default_neighborhood(std::size_t n);

/// Offset between a unit step at index s and the level-1 coefficient with
/// the largest response (s + offset). 2 for D4, 0 for Haar.
std::size_t step_response_offset(WaveletSpec spec);

/// Universal-threshold detection on the level-1 MODWT of the price path.
/// d = median|W̃₁| / 0.6745, flagged when |W̃₁,k| > d √(2 log n). Only the
/// coefficients clear of the circular boundary (k >= L-1) enter the median
/// and can be flagged; flags closer than L apart merge into one event.
JumpReport detect_jumps(std::span<const double> y, const JumpOptions& options = {});

/// Removes each detected step from every observation at or after it.
std::vector<double> jump_adjust(std::span<const double> y, const JumpReport& report);

/// One row per jump: day,grid_index,size,squared_size.
void write_jumps_csv(std::ostream& out, std::string_view day, const JumpReport& report,
                     bool header);

}  // namespace wavevol
