// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "wavevol/error.hpp"
#include "wavevol/estimators.hpp"
#include "wavevol/parallel.hpp"
#include "wavevol/simulate.hpp"

using namespace wavevol;

namespace {

ReturnGrid grid_of(std::vector<double> r) {
  ReturnGrid g;
  g.returns = std::move(r);
  return g;
}

std::vector<double> random_walk(std::size_t n, double sd, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, sd);
  std::vector<double> y(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) y[i] = y[i - 1] + z(rng);
  return y;
}

double relative_gap(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::io_error;
}

SimConfig heston_day(double noise, double jumps) {
  SimConfig cfg = SimConfig::heston();
  cfg.noise_sd = noise;
  cfg.jump_intensity = jumps;
  cfg.jump_mode = JumpMode::fixed;
  cfg.seed = 4242;
  return cfg;
}

}  // namespace

TEST_CASE("rv and bv by hand") {
  const ReturnGrid g = grid_of({0.01, -0.02, 0.015});
  CHECK(rv(g).value == doctest::Approx(7.25e-4).epsilon(1e-14));
  CHECK(bv(g, 0).value == doctest::Approx(std::numbers::pi / 2.0 * 5e-4).epsilon(1e-14));
  CHECK(bv(g, 1).value == doctest::Approx(std::numbers::pi / 2.0 * 1.5e-4).epsilon(1e-14));
  const ReturnGrid zeros = grid_of(std::vector<double>(10, 0.0));
  CHECK(rv(zeros).value == 0.0);
  CHECK(bv(zeros, 1).value == 0.0);
}

TEST_CASE("wrv equals rv on random grids") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> len(16, 600);
  std::normal_distribution<double> z(0.0, 1e-3);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> r(len(rng));
    for (double& v : r) v = z(rng);
    const ReturnGrid g = grid_of(r);
    const WaveletSpec spec = t % 2 ? WaveletSpec::haar() : WaveletSpec::d4();
    const VarianceEstimate w = wrv(g, spec, 4);
    CHECK(relative_gap(w.value, rv(g).value) < 1e-10);
    CHECK(relative_gap(std::accumulate(w.per_scale.begin(), w.per_scale.end(), 0.0), w.value) < 1e-10);
  }
}

TEST_CASE("wrv of an alternating series is all detail") {
  const VarianceEstimate w = wrv(grid_of({0.01, -0.01, 0.01, -0.01}), WaveletSpec::haar(), 1);
  REQUIRE(w.per_scale.size() == 2);
  CHECK(w.per_scale[0] == doctest::Approx(4e-4).epsilon(1e-12));
  CHECK(std::fabs(w.per_scale[1]) < 1e-20);
  const VarianceEstimate flat = wrv(grid_of(std::vector<double>(32, 0.0)), WaveletSpec::d4(), 3);
  CHECK(flat.value == 0.0);
  for (double v : flat.per_scale) CHECK(v == 0.0);
}

TEST_CASE("constant prices give zero for every estimator") {
  const std::vector<double> y(23401, std::log(1.9));
  EstimatorSettings s;
  s.slow_stride = 300;
  for (EstimatorKind k : all_estimators()) {
    CAPTURE(to_string(k));
    CHECK(estimate(k, y, s).value == 0.0);
  }
}

TEST_CASE("two scale preconditions") {
  const std::vector<double> y(11, 0.0);
  TwoScaleOptions o;
  o.grids = 6;
  CHECK(code_of([&] { tsrv(y, o); }) == ErrorCode::too_few_ticks);
  std::vector<double> short_path(100, 0.0);
  CHECK(code_of([&] { optimal_grid_count(short_path, 10); }) == ErrorCode::too_few_ticks);
  CHECK(code_of([&] { rk(grid_of(std::vector<double>(10, 0.1)), Kernel::parzen, 5); }) ==
        ErrorCode::bandwidth_too_large);
}

TEST_CASE("tsrv against an explicit subgrid average") {
  std::mt19937_64 rng(42);
  const std::vector<double> y = random_walk(999, 1e-3, rng);
  const std::size_t G = 7;
  const double n = 999.0;
  double avg = 0.0;
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t i = g + G; i < y.size(); i += G) avg += (y[i] - y[i - G]) * (y[i] - y[i - G]);
  }
  avg /= G;
  double all = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) all += (y[i] - y[i - 1]) * (y[i] - y[i - 1]);
  const double nbar = (n - G + 1) / G;
  TwoScaleOptions o;
  o.grids = G;
  o.small_sample = false;
  CHECK(tsrv(y, o).value == doctest::Approx(avg - nbar / n * all).epsilon(1e-12));
  o.small_sample = true;
  CHECK(tsrv(y, o).value == doctest::Approx((avg - nbar / n * all) / (1.0 - nbar / n)).epsilon(1e-12));
}

TEST_CASE("jwtsrv per scale sums to value") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> y = random_walk(6000, 1e-4, rng);
    std::normal_distribution<double> noise(0.0, 2e-4);
    for (double& v : y) v += noise(rng);
    JwtsrvOptions o;
    o.grids = 50;
    const VarianceEstimate e = jwtsrv(y, o);
    REQUIRE(e.per_scale.size() == 5);
    CHECK(relative_gap(std::accumulate(e.per_scale.begin(), e.per_scale.end(), 0.0), e.value) < 1e-10);
  }
}

TEST_CASE("jwtsrv with one grid and no corrections reduces to wrv") {
  std::mt19937_64 rng(44);
  const std::vector<double> y = random_walk(2000, 1e-4, rng);
  JwtsrvOptions o;
  o.grids = 1;
  o.small_sample = false;
  o.noise_correction = false;
  JumpReport report;
  const VarianceEstimate e = jwtsrv(y, o, &report);
  const std::vector<double> adjusted = jump_adjust(y, report);
  const VarianceEstimate w = wrv(sparse_grid(adjusted, 1), o.spec, o.levels);
  CHECK(relative_gap(e.value, w.value) < 1e-10);
  for (std::size_t j = 0; j < w.per_scale.size(); ++j) {
    CHECK(relative_gap(e.per_scale[j], w.per_scale[j]) < 1e-10);
  }
  o.small_sample = true;
  CHECK(code_of([&] { jwtsrv(y, o); }) == ErrorCode::invalid_config);
}

TEST_CASE("estimates are scale equivariant") {
  std::mt19937_64 rng(45);
  std::vector<double> y = random_walk(23400, 6e-5, rng);
  std::normal_distribution<double> noise(0.0, 5e-4);
  for (double& v : y) v += noise(rng);
  for (std::size_t i = 9000; i < y.size(); ++i) y[i] += 0.02;

  EstimatorSettings s;
  s.rk_bandwidth = 4;
  for (double c : {2.0, 3.0}) {
    std::vector<double> scaled(y);
    for (double& v : scaled) v *= c;
    for (EstimatorKind k : {EstimatorKind::rv, EstimatorKind::bv, EstimatorKind::rk, EstimatorKind::wrv,
                            EstimatorKind::tsrv, EstimatorKind::jwtsrv}) {
      CAPTURE(to_string(k));
      CAPTURE(c);
      const double base = estimate(k, y, s).value;
      const double other = estimate(k, scaled, s).value;
      const bool sparse = k == EstimatorKind::rv || k == EstimatorKind::bv || k == EstimatorKind::rk ||
                          k == EstimatorKind::wrv;
      if (sparse && c == 2.0) {
        CHECK(other == c * c * base);
      } else {
        CHECK(relative_gap(other, c * c * base) < (sparse ? 1e-13 : 1e-10));
      }
    }
  }
}

TEST_CASE("optimal grid count") {
  std::vector<double> smooth(23401);
  for (std::size_t i = 0; i < smooth.size(); ++i) smooth[i] = 1e-3 * std::sin(static_cast<double>(i) / 3000.0);
  CHECK(optimal_grid_count(smooth, 300) == 2);

  std::mt19937_64 rng(46);
  std::vector<double> y = random_walk(23400, 6e-5, rng);
  std::normal_distribution<double> noise(0.0, 1e-3);
  for (double& v : y) v += noise(rng);
  const std::size_t g = optimal_grid_count(y, 300);
  CHECK(g == optimal_grid_count(y, 300));
  CHECK(g >= 2);
  CHECK(g <= 23400 / 2);
}

TEST_CASE("optimal grid count grows with noise on matched paths") {
  const std::size_t draws = 200;
  std::vector<int> larger(draws, 0);
  parallel_for(draws, 0, [&](std::size_t p) {
    const SimConfig cfg = heston_day(0.0, 0.0);
    const SimPath path = simulate(cfg, p);
    const std::vector<double> low = add_noise(path.latent, 0.0005, cfg.seed, p);
    const std::vector<double> high = add_noise(path.latent, 0.0015, cfg.seed, p);
    larger[p] = optimal_grid_count(high, 300) > optimal_grid_count(low, 300) ? 1 : 0;
  });
  const int count = std::accumulate(larger.begin(), larger.end(), 0);
  MESSAGE("G*(high noise) > G*(low noise) on " << count << " of " << draws);
  CHECK(count >= 180);
}

TEST_CASE("rv is unbiased without noise or jumps") {
  const std::size_t paths = 500;
  std::vector<double> err(paths);
  parallel_for(paths, 0, [&](std::size_t p) {
    const SimPath path = simulate(heston_day(0.0, 0.0), p);
    err[p] = (rv(sparse_grid(path.observed, 300)).value - path.true_iv[0]) * kTradingDaysPerYear;
  });
  const double mean = compensated_mean(err);
  const double se = std::sqrt(sample_variance(err) / paths);
  MESSAGE("annualized RV bias " << mean << " (se " << se << ")");
  CHECK(std::fabs(mean) < 3.0 * se);
  CHECK(std::fabs(mean) < 3e-4);
}

TEST_CASE("rk tracks rv on noise-free brownian days") {
  const std::size_t paths = 500;
  std::vector<double> rvs(paths), rks(paths);
  parallel_for(paths, 0, [&](std::size_t p) {
    std::mt19937_64 rng = path_rng(47, p, 0);
    const std::vector<double> y = random_walk(23400, std::sqrt(0.04 / 252.0 / 23400.0), rng);
    EstimatorSettings s;
    rvs[p] = estimate(EstimatorKind::rv, y, s).value;
    rks[p] = estimate(EstimatorKind::rk, y, s).value;
  });
  const double gap = relative_gap(compensated_mean(rks), compensated_mean(rvs));
  MESSAGE("mean relative RK/RV gap " << gap);
  CHECK(gap < 0.02);
}

TEST_CASE("bipower variation resists a jump") {
  const std::size_t paths = 200;
  std::vector<double> rv_err(paths), bv_err(paths);
  parallel_for(paths, 0, [&](std::size_t p) {
    const SimPath path = simulate(heston_day(0.0, 1.0), p);
    EstimatorSettings s;
    rv_err[p] = estimate(EstimatorKind::rv, path.observed, s).value - path.true_iv[0];
    bv_err[p] = estimate(EstimatorKind::bv, path.observed, s).value - path.true_iv[0];
  });
  const double rv_bias = compensated_mean(rv_err);
  const double bv_bias = compensated_mean(bv_err);
  MESSAGE("one-jump bias RV " << rv_bias << " BV " << bv_bias);
  CHECK(rv_bias > 0.0);
  CHECK(bv_bias < 0.5 * rv_bias);
}

TEST_CASE("jwtsrv does not depend on where the jump falls") {
  const std::size_t paths = 200;
  const double where[] = {0.2, 0.5, 0.8};
  std::vector<std::array<double, 3>> values(paths);
  parallel_for(paths, 0, [&](std::size_t p) {
    const SimPath path = simulate(heston_day(0.0005, 0.0), p);
    for (int k = 0; k < 3; ++k) {
      std::vector<double> y = path.observed;
      const auto at = static_cast<std::size_t>(where[k] * 23400.0);
      for (std::size_t i = at; i < y.size(); ++i) y[i] += 0.025;
      values[p][k] = estimate(EstimatorKind::jwtsrv, y, EstimatorSettings{}).value;
    }
  });
  std::array<double, 3> mean{};
  for (const auto& v : values) {
    for (int k = 0; k < 3; ++k) mean[k] += v[k] / paths;
  }
  const double lo = *std::min_element(mean.begin(), mean.end());
  const double hi = *std::max_element(mean.begin(), mean.end());
  MESSAGE("mean JWTSRV by position " << mean[0] << " " << mean[1] << " " << mean[2]);
  CHECK((hi - lo) / lo < 0.02);
}

TEST_CASE("horizon decomposition") {
  CHECK(default_horizon_labels(300.0, 4) ==
        std::vector<std::string>{"5m-10m", "10m-20m", "20m-40m", "40m-80m", "80m-1d"});
  CHECK(default_horizon_labels(30.0, 1) == std::vector<std::string>{"30s-1m", "1m-1d"});

  VarianceEstimate e;
  e.per_scale = {0.4, 0.3, 0.2, 0.05, 0.05};
  e.value = 1.0;
  const std::vector<std::string> labels = default_horizon_labels(300.0, 4);
  const std::vector<HorizonComponent> parts = decompose_horizons(e, labels);
  REQUIRE(parts.size() == 5);
  CHECK(parts[0].label == "5m-10m");
  CHECK(parts[0].value == 0.4);

  const std::vector<std::string> grouped{"fast", "fast", "slow", "slow", "slow"};
  const std::vector<HorizonComponent> two = decompose_horizons(e, grouped);
  REQUIRE(two.size() == 2);
  CHECK(two[0].value == doctest::Approx(0.7));
  CHECK(two[1].value == doctest::Approx(0.3));

  VarianceEstimate single;
  single.per_scale = {0.7};
  single.value = 0.7;
  const std::vector<std::string> one{"all"};
  CHECK(decompose_horizons(single, one)[0].value == 0.7);

  CHECK(code_of([&] { decompose_horizons(VarianceEstimate{}, labels); }) == ErrorCode::missing_per_scale);
  const std::vector<std::string> too_few{"a", "b"};
  CHECK(code_of([&] { decompose_horizons(e, too_few); }) == ErrorCode::config_error);
}

TEST_CASE("estimator names") {
  CHECK(estimator_from_name("jwtsrv") == EstimatorKind::jwtsrv);
  CHECK(estimator_from_name("TSRVopt") == EstimatorKind::tsrv_opt);
  CHECK(all_estimators().size() == 8);
  try {
    estimator_from_name("GARCH");
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::usage_error);
    CHECK(std::string(e.what()).find("JWTSRV") != std::string::npos);
  }
}
