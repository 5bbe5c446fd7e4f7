// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavevol {

enum class ErrorCode {
  unsupported_family,
  series_too_short,
  level_too_deep,
  insufficient_coefficients,
  degenerate_scale,
  location_out_of_range,
  too_few_ticks,
  bandwidth_too_large,
  missing_per_scale,
  invalid_config,
  invalid_hurst,
  paths_below_minimum,
  collinear_regressors,
  too_few_observations,
  parse_error,
  nonpositive_price,
  no_ticks_in_session,
  config_error,
  config_not_found,
  usage_error,
  io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every recoverable failure in the toolkit is reported as an Error carrying a
/// stable code; callers dispatch on code(), messages are for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wavevol
