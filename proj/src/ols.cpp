// SPDX-License-Identifier: Apache-2.0
#include "wavevol/ols.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "wavevol/error.hpp"

namespace wavevol {

OlsResult ols(std::span<const double> y, const std::vector<std::vector<double>>& columns,
              double max_condition) {
  const auto n = static_cast<Eigen::Index>(y.size());
  const auto k = static_cast<Eigen::Index>(columns.size() + 1);
  if (n <= k) {
    throw Error(ErrorCode::too_few_observations,
                std::to_string(n) + " observations for " + std::to_string(k) + " coefficients");
  }
  Eigen::MatrixXd x(n, k);
  x.col(0).setOnes();
  for (Eigen::Index c = 1; c < k; ++c) {
    const auto& col = columns[static_cast<std::size_t>(c - 1)];
    if (static_cast<Eigen::Index>(col.size()) != n) {
      throw Error(ErrorCode::invalid_config, "regressor length differs from response");
    }
    x.col(c) = Eigen::Map<const Eigen::VectorXd>(col.data(), n);
  }
  const Eigen::Map<const Eigen::VectorXd> yy(y.data(), n);

  Eigen::VectorXd norms = x.colwise().norm();
  for (Eigen::Index c = 0; c < k; ++c) {
    if (norms(c) == 0.0) throw Error(ErrorCode::collinear_regressors, "regressor column is all zeros");
  }
  const Eigen::MatrixXd scaled = x * norms.cwiseInverse().asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const auto& s = svd.singularValues();
  const double condition = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : INFINITY;
  if (!(condition <= max_condition)) {
    throw Error(ErrorCode::collinear_regressors, "condition number " + std::to_string(condition));
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::VectorXd beta = qr.solve(yy);
  const Eigen::VectorXd resid = yy - x * beta;
  const double ssr = resid.squaredNorm();
  const double ybar = yy.mean();
  const double sst = (yy.array() - ybar).square().sum();

  const double sigma2 = ssr / static_cast<double>(n - k);
  const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();

  OlsResult r;
  r.observations = static_cast<std::size_t>(n);
  r.r_squared = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 1.0;
  for (Eigen::Index c = 0; c < k; ++c) {
    r.coefficients.push_back(beta(c));
    r.standard_errors.push_back(std::sqrt(std::max(0.0, sigma2 * xtx_inv(c, c))));
  }
  return r;
}

}  // namespace wavevol
