// SPDX-License-Identifier: Apache-2.0
#include "wavevol/error.hpp"

namespace wavevol {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::unsupported_family: return "unsupported-family";
    case ErrorCode::series_too_short: return "series-too-short";
    case ErrorCode::level_too_deep: return "level-too-deep";
    case ErrorCode::insufficient_coefficients: return "insufficient-coefficients";
    case ErrorCode::degenerate_scale: return "degenerate-scale";
    case ErrorCode::location_out_of_range: return "location-out-of-range";
    case ErrorCode::too_few_ticks: return "too-few-ticks";
    case ErrorCode::bandwidth_too_large: return "bandwidth-too-large";
    case ErrorCode::missing_per_scale: return "missing-per-scale";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::invalid_hurst: return "invalid-H";
    case ErrorCode::paths_below_minimum: return "paths-below-minimum";
    case ErrorCode::collinear_regressors: return "collinear-regressors";
    case ErrorCode::too_few_observations: return "too-few-observations";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::nonpositive_price: return "nonpositive-price";
    case ErrorCode::no_ticks_in_session: return "no-ticks-in-session";
    case ErrorCode::config_error: return "config-error";
    case ErrorCode::config_not_found: return "config-not-found";
    case ErrorCode::usage_error: return "usage-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown-error";
}

}  // namespace wavevol
