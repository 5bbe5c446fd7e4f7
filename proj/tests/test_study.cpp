// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wavevol/error.hpp"
#include "wavevol/ols.hpp"
#include "wavevol/parallel.hpp"
#include "wavevol/study.hpp"

using namespace wavevol;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io_error;
}

BiasStudyConfig small_bias_config() {
  BiasStudyConfig cfg;
  cfg.model = SimConfig::heston();
  cfg.model.steps = 2340;
  cfg.model.jump_mode = JumpMode::fixed;
  cfg.settings.fast_interval = 10.0;
  cfg.settings.slow_stride = 30;
  cfg.estimators = {EstimatorKind::rv, EstimatorKind::tsrv, EstimatorKind::jwtsrv};
  cfg.noise_levels = {0.0005};
  cfg.jump_levels = {1.0};
  return cfg;
}

}  // namespace

TEST_CASE("ar1 fits") {
  const std::vector<double> flat(40, 0.3);
  const Ar1Fit c = fit_ar1(flat);
  CHECK(c.b == 0.0);
  CHECK(c.a == doctest::Approx(0.3));
  CHECK(ar1_forecast(flat, 39) == doctest::Approx(0.3));

  std::vector<double> exact{3.0};
  for (int i = 0; i < 40; ++i) exact.push_back(0.1 + 0.5 * exact.back());
  const Ar1Fit f = fit_ar1(exact);
  CHECK(std::fabs(f.a - 0.1) < 1e-10);
  CHECK(std::fabs(f.b - 0.5) < 1e-10);
  CHECK(ar1_forecast(exact, 35) == doctest::Approx(0.1 + 0.5 * exact[35]).epsilon(1e-10));

  const std::vector<double> short_series(29, 1.0);
  CHECK(code_of([&] { ar1_forecast(short_series, 28); }) == ErrorCode::series_too_short);
}

TEST_CASE("ar1 slope of day-boundary spot variance") {
  SimConfig cfg = SimConfig::heston();
  cfg.steps = 78;
  cfg.days = 4000;
  const std::size_t series = 100;
  std::vector<double> slopes(series);
  parallel_for(series, 0, [&](std::size_t p) {
    const SimPath path = simulate(cfg, p);
    std::vector<double> v;
    for (std::size_t d = 0; d <= cfg.days; ++d) v.push_back(path.variance[d * cfg.steps]);
    slopes[p] = fit_ar1(v).b;
  });
  const double b = std::exp(-cfg.kappa / 252.0);
  const double T = static_cast<double>(cfg.days);
  const double expected = b - (1.0 + 3.0 * b) / T;
  const double mean = compensated_mean(slopes);
  const double se = std::sqrt(sample_variance(slopes) / series);
  MESSAGE("mean slope " << mean << " expected " << expected << " se " << se);
  CHECK(std::fabs(mean - expected) < 3.0 * se);
}

TEST_CASE("ols recovers an exact linear relation") {
  std::vector<double> x(50), z(50), y(50);
  for (int i = 0; i < 50; ++i) {
    x[i] = std::sin(0.3 * i);
    z[i] = std::cos(0.17 * i * i);
    y[i] = 0.25 - 1.5 * x[i] + 3.0 * z[i];
  }
  const OlsResult r = ols(y, {x, z});
  CHECK(std::fabs(r.coefficients[0] - 0.25) < 1e-10);
  CHECK(std::fabs(r.coefficients[1] + 1.5) < 1e-10);
  CHECK(std::fabs(r.coefficients[2] - 3.0) < 1e-10);
  CHECK(r.r_squared == doctest::Approx(1.0));
  CHECK(r.observations == 50);

  CHECK(code_of([&] { ols(y, {x, x}); }) == ErrorCode::collinear_regressors);
  const std::vector<double> three{1, 2, 3};
  CHECK(code_of([&] { ols(three, {three, three}); }) == ErrorCode::too_few_observations);
}

TEST_CASE("mincer zarnowitz on a perfect forecast") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> z(1.0, 0.3);
  std::vector<double> truth(100);
  for (double& v : truth) v = z(rng);
  const RegressionReport r = mincer_zarnowitz(truth, {"RV"}, {truth});
  CHECK(std::fabs(r.fit.coefficients[0]) < 1e-12);
  CHECK(r.fit.coefficients[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> few(20, 1.0);
  CHECK(code_of([&] { mincer_zarnowitz(few, {"RV"}, {few}); }) == ErrorCode::too_few_observations);
}

TEST_CASE("noisy forecasts attenuate the slope") {
  std::mt19937_64 rng(62);
  std::normal_distribution<double> signal(1.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.5);
  const int reps = 1000;
  double mean_beta = 0.0;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> truth(200), forecast(200);
    for (int i = 0; i < 200; ++i) {
      truth[i] = signal(rng);
      forecast[i] = truth[i] + noise(rng);
    }
    mean_beta += mincer_zarnowitz(truth, {"f"}, {forecast}).fit.coefficients[1] / reps;
  }
  CHECK(mean_beta < 1.0);
  CHECK(mean_beta == doctest::Approx(1.0 / 1.25).epsilon(0.02));
}

TEST_CASE("joint regressions nest the individual ones") {
  std::mt19937_64 rng(63);
  std::normal_distribution<double> z;
  std::vector<double> truth(150);
  std::vector<std::vector<double>> f(3, std::vector<double>(150));
  for (int i = 0; i < 150; ++i) {
    truth[i] = z(rng);
    for (int k = 0; k < 3; ++k) f[k][i] = truth[i] + (k + 1) * 0.5 * z(rng);
  }
  const RegressionReport joint = mincer_zarnowitz(truth, {"a", "b", "c"}, f);
  for (int k = 0; k < 3; ++k) {
    const RegressionReport one = mincer_zarnowitz(truth, {"x"}, {f[k]});
    CHECK(joint.fit.r_squared >= one.fit.r_squared);
  }
}

TEST_CASE("bias study preconditions and layout") {
  BiasStudyConfig cfg = small_bias_config();
  cfg.paths = 0;
  CHECK(code_of([&] { run_bias_study(cfg); }) == ErrorCode::paths_below_minimum);
  cfg.paths = 49;
  CHECK(code_of([&] { run_bias_study(cfg); }) == ErrorCode::paths_below_minimum);

  cfg.paths = 50;
  cfg.noise_levels = {0.0, 0.001};
  cfg.jump_levels = {0.0, 2.0};
  const BiasTable t = run_bias_study(cfg);
  CHECK(t.cells.size() == 4);
  CHECK(t.paths == 50);
  for (const BiasCell& c : t.cells) {
    CHECK(c.mean_bias.size() == 3);
    for (double v : c.variance) CHECK(v >= 0.0);
  }
  CHECK(t.bias(0.001, 0.0, EstimatorKind::rv) > t.bias(0.0, 0.0, EstimatorKind::rv));
  CHECK(t.bias(0.0, 2.0, EstimatorKind::rv) > t.bias(0.0, 0.0, EstimatorKind::rv));

  std::ostringstream csv, text;
  write_bias_csv(csv, t);
  write_bias_text(text, t);
  CHECK(csv.str().find("noise_sd") != std::string::npos);
  CHECK(text.str().find("JWTSRV") != std::string::npos);
  CHECK(bias_svg(t, 2.0).rfind("<svg", 0) == 0);
}

TEST_CASE("bias study results are stable in the path count") {
  BiasStudyConfig big = small_bias_config();
  big.paths = 10000;
  BiasStudyConfig small = small_bias_config();
  small.paths = 1000;
  small.model.seed = big.model.seed + 1;
  const BiasTable a = run_bias_study(big);
  const BiasTable b = run_bias_study(small);
  for (std::size_t k = 0; k < big.estimators.size(); ++k) {
    // Both fields carry the report scale, so the standard error of a mean is
    // sqrt(scale * variance / paths).
    const double se = std::sqrt(kReportScale * (a.cells[0].variance[k] / 10000.0 + b.cells[0].variance[k] / 1000.0));
    CAPTURE(to_string(big.estimators[k]));
    CHECK(std::fabs(a.cells[0].mean_bias[k] - b.cells[0].mean_bias[k]) < 3.0 * se);
  }
}

TEST_CASE("forecast study layout") {
  ForecastStudyConfig cfg;
  cfg.model.steps = 780;
  cfg.settings.fast_interval = 30.0;
  cfg.settings.slow_stride = 10;
  cfg.paths = 30;
  const ForecastReport r = run_forecast_study(cfg);
  CHECK(r.paths == 30);
  CHECK(r.truth.size() == 30);
  REQUIRE(r.forecasts.size() == cfg.estimators.size());
  CHECK(r.forecasts[0].size() == 30);
  CHECK(r.individual.size() == cfg.estimators.size());
  CHECK(r.joint.size() == 4);
  CHECK(r.noise_sd == 0.0005);
  CHECK(r.jump_level == 1.0);
  for (const auto& reg : r.individual) {
    CHECK(reg.fit.r_squared >= 0.0);
    CHECK(reg.fit.r_squared <= 1.0);
    for (double se : reg.fit.standard_errors) CHECK(se > 0.0);
  }
  for (const auto& reg : r.joint) {
    for (const auto& one : r.individual) {
      if (std::find(reg.regressors.begin(), reg.regressors.end(), one.regressors[0]) != reg.regressors.end()) {
        CHECK(reg.fit.r_squared >= one.fit.r_squared - 1e-12);
      }
    }
  }
  std::ostringstream csv, text;
  write_forecast_csv(csv, r);
  write_forecast_text(text, r);
  CHECK(text.str().find("JWTSRV") != std::string::npos);
  CHECK(forecast_svg(r, EstimatorKind::jwtsrv).rfind("<svg", 0) == 0);

  cfg.paths = 10;
  CHECK(code_of([&] { run_forecast_study(cfg); }) == ErrorCode::paths_below_minimum);
}

TEST_CASE("sample moments") {
  const std::vector<double> x{1, 2, 3, 4};
  const Moments m = sample_moments(x);
  CHECK(m.count == 4);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(m.skewness == doctest::Approx(0.0));
}
