// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wavevol/estimators.hpp"
#include "wavevol/ols.hpp"
#include "wavevol/simulate.hpp"

namespace wavevol {

/// Bias and variance are reported for the annualized error
/// (estimate - true IV) x 252, multiplied by this factor.
inline constexpr double kReportScale = 1e4;

std::vector<EstimatorKind> table_estimators();

struct BiasStudyConfig {
  SimConfig model;
  std::vector<double> noise_levels{0.0, 0.0005, 0.001, 0.0015};
  std::vector<double> jump_levels{0.0, 1.0, 2.0, 3.0};
  std::size_t paths = 200;
  std::vector<EstimatorKind> estimators = table_estimators();
  EstimatorSettings settings;
  unsigned threads = 0;
};

struct BiasCell {
  double noise_sd = 0.0;
  double jump_level = 0.0;
  std::vector<double> mean_bias;  // per estimator, report units
  std::vector<double> variance;
};

struct BiasTable {
  std::string model;
  std::vector<EstimatorKind> estimators;
  std::vector<BiasCell> cells;  // noise-major within each jump level
  std::size_t paths = 0;

  const BiasCell& cell(double noise_sd, double jump_level) const;
  double bias(double noise_sd, double jump_level, EstimatorKind kind) const;
};

/// Every cell reuses the same path seeds: jump levels share the diffusion
/// draws and noise levels share the noise draws.
BiasTable run_bias_study(const BiasStudyConfig& cfg);

struct Ar1Fit {
  double a = 0.0;
  double b = 0.0;
};

/// OLS of s[i+1] on s[i] over the whole series; a constant series gives
/// b = 0, a = mean.
Ar1Fit fit_ar1(std::span<const double> series);
/// Fits on series[0..m] and returns a + b series[m].
double ar1_forecast(std::span<const double> series, std::size_t m);

struct RegressionReport {
  std::string label;
  std::vector<std::string> regressors;  // without the constant
  OlsResult fit;
};

/// Regresses truth on a constant and the named forecast columns.
RegressionReport mincer_zarnowitz(std::span<const double> truth, const std::vector<std::string>& names,
                                  const std::vector<std::vector<double>>& forecasts);

struct ForecastStudyConfig {
  SimConfig model = default_model();
  std::size_t paths = 500;
  std::size_t estimation_days = 100;
  std::vector<EstimatorKind> estimators = table_estimators();
  EstimatorSettings settings;
  unsigned threads = 0;

  static SimConfig default_model();
};

struct ForecastReport {
  std::vector<EstimatorKind> estimators;
  std::vector<Ar1Fit> mean_ar1;  // averaged over paths
  std::vector<RegressionReport> individual;
  std::vector<RegressionReport> joint;
  std::vector<double> truth;
  std::vector<std::vector<double>> forecasts;  // per estimator, per path
  std::size_t paths = 0;
  double noise_sd = 0.0;
  double jump_level = 0.0;

  const RegressionReport& individual_for(EstimatorKind kind) const;
};

ForecastReport run_forecast_study(const ForecastStudyConfig& cfg);

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // not excess
};

Moments sample_moments(std::span<const double> x);

void write_bias_csv(std::ostream& out, const BiasTable& table);
void write_bias_text(std::ostream& out, const BiasTable& table);
void write_forecast_csv(std::ostream& out, const ForecastReport& report);
void write_forecast_text(std::ostream& out, const ForecastReport& report);
/// Grouped bars of mean bias per estimator for one jump level.
std::string bias_svg(const BiasTable& table, double jump_level);
/// Forecast vs truth scatter for one estimator.
std::string forecast_svg(const ForecastReport& report, EstimatorKind kind);

}  // namespace wavevol
