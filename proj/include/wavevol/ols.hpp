// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wavevol {

/// OLS of y on a constant and the given columns, classical standard errors.
struct OlsResult {
  std::vector<double> coefficients;  // constant first
  std::vector<double> standard_errors;
  double r_squared = 0.0;
  std::size_t observations = 0;
};

/// Raises collinear-regressors when the column-scaled design has condition
/// number above `max_condition`, too-few-observations when n <= k.
OlsResult ols(std::span<const double> y, const std::vector<std::vector<double>>& columns,
              double max_condition = 1e10);

}  // namespace wavevol
