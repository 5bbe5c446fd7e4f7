// SPDX-License-Identifier: Apache-2.0
#include "wavevol/study.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "wavevol/error.hpp"
#include "wavevol/parallel.hpp"
#include "wavevol/svg.hpp"

namespace wavevol {
namespace {

constexpr std::size_t kMinBiasPaths = 50;
constexpr std::size_t kMinSeries = 30;
constexpr std::size_t kMinObservations = 30;

std::string tag(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::tsrv_opt: return "TSRV*";
    case EstimatorKind::jwtsrv_opt: return "JWTSRV*";
    default: return std::string(to_string(kind));
  }
}

std::string fixed(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

std::string noise_label(double sd) {
  std::ostringstream os;
  os << "eps=" << sd;
  return os.str();
}

std::string jump_label(double level) {
  if (level == 0.0) return "No Jumps";
  if (level == 1.0) return "One Jump";
  if (level == 2.0) return "Two Jumps";
  if (level == 3.0) return "Three Jumps";
  std::ostringstream os;
  os << "Jumps " << level;
  return os.str();
}

bool contains(const std::vector<EstimatorKind>& v, EstimatorKind k) {
  return std::find(v.begin(), v.end(), k) != v.end();
}

}  // namespace

std::vector<EstimatorKind> table_estimators() {
  return {EstimatorKind::rv,     EstimatorKind::bv, EstimatorKind::tsrv, EstimatorKind::tsrv_opt,
          EstimatorKind::rk,     EstimatorKind::jwtsrv, EstimatorKind::jwtsrv_opt};
}

const BiasCell& BiasTable::cell(double noise_sd, double jump_level) const {
  for (const BiasCell& c : cells) {
    if (c.noise_sd == noise_sd && c.jump_level == jump_level) return c;
  }
  throw Error(ErrorCode::invalid_config, "no cell for noise " + std::to_string(noise_sd) + ", jumps " +
                                             std::to_string(jump_level));
}

double BiasTable::bias(double noise_sd, double jump_level, EstimatorKind kind) const {
  const auto it = std::find(estimators.begin(), estimators.end(), kind);
  if (it == estimators.end()) {
    throw Error(ErrorCode::invalid_config, "estimator " + std::string(to_string(kind)) + " not in table");
  }
  return cell(noise_sd, jump_level).mean_bias[static_cast<std::size_t>(it - estimators.begin())];
}

BiasTable run_bias_study(const BiasStudyConfig& cfg) {
  if (cfg.paths < kMinBiasPaths) {
    throw Error(ErrorCode::paths_below_minimum,
                std::to_string(cfg.paths) + " paths, need at least " + std::to_string(kMinBiasPaths));
  }
  if (cfg.estimators.empty()) throw Error(ErrorCode::invalid_config, "empty estimator set");
  cfg.model.validate();

  const std::size_t nj = cfg.jump_levels.size();
  const std::size_t nn = cfg.noise_levels.size();
  const std::size_t ne = cfg.estimators.size();
  const std::size_t paths = cfg.paths;
  // errors[((j * nn + s) * ne + e) * paths + p]
  std::vector<double> errors(nj * nn * ne * paths, 0.0);

  parallel_for(nj * paths, cfg.threads, [&](std::size_t task) {
    const std::size_t j = task / paths;
    const std::size_t p = task % paths;
    SimConfig model = cfg.model;
    model.days = 1;
    model.noise_sd = 0.0;
    model.jump_intensity = cfg.jump_levels[j];
    const SimPath path = simulate(model, p);
    const double truth = path.true_iv[0];
    for (std::size_t s = 0; s < nn; ++s) {
      const std::vector<double> y = add_noise(path.latent, cfg.noise_levels[s], model.seed, p);
      for (std::size_t e = 0; e < ne; ++e) {
        const double value = estimate(cfg.estimators[e], y, cfg.settings).value;
        errors[((j * nn + s) * ne + e) * paths + p] = (value - truth) * kTradingDaysPerYear;
      }
    }
  });

  BiasTable table;
  table.model = std::string(to_string(cfg.model.model));
  if (cfg.model.model == Model::fractional_sv) {
    std::ostringstream os;
    os << table.model << " H=" << cfg.model.hurst;
    table.model = os.str();
  }
  table.estimators = cfg.estimators;
  table.paths = paths;
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t s = 0; s < nn; ++s) {
      BiasCell cell;
      cell.noise_sd = cfg.noise_levels[s];
      cell.jump_level = cfg.jump_levels[j];
      for (std::size_t e = 0; e < ne; ++e) {
        const std::span<const double> err(&errors[((j * nn + s) * ne + e) * paths], paths);
        cell.mean_bias.push_back(compensated_mean(err) * kReportScale);
        cell.variance.push_back(sample_variance(err) * kReportScale);
      }
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

Ar1Fit fit_ar1(std::span<const double> series) {
  if (series.size() < 3) throw Error(ErrorCode::series_too_short, "AR(1) needs at least 3 points");
  const std::size_t n = series.size() - 1;
  const auto x = series.first(n);
  const auto y = series.subspan(1);
  const double mx = compensated_mean(x);
  const double my = compensated_mean(y);
  CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < n; ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
  }
  Ar1Fit fit;
  if (!(sxx.value() > 0.0)) {
    fit.a = my;
    return fit;
  }
  fit.b = sxy.value() / sxx.value();
  fit.a = my - fit.b * mx;
  return fit;
}

double ar1_forecast(std::span<const double> series, std::size_t m) {
  if (m >= series.size()) throw Error(ErrorCode::series_too_short, "forecast origin beyond series");
  if (m + 1 < kMinSeries) {
    throw Error(ErrorCode::series_too_short,
                "AR(1) forecast needs at least " + std::to_string(kMinSeries) + " observations");
  }
  const Ar1Fit fit = fit_ar1(series.first(m + 1));
  return fit.a + fit.b * series[m];
}

RegressionReport mincer_zarnowitz(std::span<const double> truth, const std::vector<std::string>& names,
                                  const std::vector<std::vector<double>>& forecasts) {
  if (truth.size() < kMinObservations) {
    throw Error(ErrorCode::too_few_observations, std::to_string(truth.size()) + " observations, need " +
                                                     std::to_string(kMinObservations));
  }
  RegressionReport r;
  r.regressors = names;
  for (std::size_t i = 0; i < names.size(); ++i) r.label += (i ? "+" : "") + names[i];
  r.fit = ols(truth, forecasts);
  return r;
}

SimConfig ForecastStudyConfig::default_model() {
  SimConfig m = SimConfig::heston();
  m.noise_sd = 0.0005;
  m.jump_intensity = 1.0;
  m.jump_mode = JumpMode::fixed;
  m.days = 101;
  return m;
}

const RegressionReport& ForecastReport::individual_for(EstimatorKind kind) const {
  const auto it = std::find(estimators.begin(), estimators.end(), kind);
  if (it == estimators.end()) {
    throw Error(ErrorCode::invalid_config, "estimator " + std::string(to_string(kind)) + " not in report");
  }
  return individual[static_cast<std::size_t>(it - estimators.begin())];
}

ForecastReport run_forecast_study(const ForecastStudyConfig& cfg) {
  if (cfg.estimators.empty()) throw Error(ErrorCode::invalid_config, "empty estimator set");
  if (cfg.paths < kMinObservations) {
    throw Error(ErrorCode::paths_below_minimum,
                std::to_string(cfg.paths) + " paths, need at least " + std::to_string(kMinObservations));
  }
  SimConfig model = cfg.model;
  model.days = cfg.estimation_days + 1;
  model.validate();

  const std::size_t ne = cfg.estimators.size();
  std::vector<double> truth(cfg.paths);
  std::vector<std::vector<double>> forecasts(ne, std::vector<double>(cfg.paths));
  std::vector<std::vector<Ar1Fit>> fits(ne, std::vector<Ar1Fit>(cfg.paths));

  parallel_for(cfg.paths, cfg.threads, [&](std::size_t p) {
    const SimPath path = simulate(model, p);
    truth[p] = path.true_iv[cfg.estimation_days] * kTradingDaysPerYear;
    std::vector<double> series(cfg.estimation_days);
    for (std::size_t e = 0; e < ne; ++e) {
      for (std::size_t d = 0; d < cfg.estimation_days; ++d) {
        series[d] = estimate(cfg.estimators[e], path.observed_day(d), cfg.settings).value * kTradingDaysPerYear;
      }
      fits[e][p] = fit_ar1(series);
      forecasts[e][p] = ar1_forecast(series, series.size() - 1);
    }
  });

  ForecastReport report;
  report.estimators = cfg.estimators;
  report.paths = cfg.paths;
  report.noise_sd = model.noise_sd;
  report.jump_level = model.jump_intensity;
  for (std::size_t e = 0; e < ne; ++e) {
    CompensatedSum a, b;
    for (const Ar1Fit& f : fits[e]) {
      a.add(f.a);
      b.add(f.b);
    }
    const double n = static_cast<double>(cfg.paths);
    report.mean_ar1.push_back({a.value() / n, b.value() / n});
    report.individual.push_back(mincer_zarnowitz(truth, {tag(cfg.estimators[e])}, {forecasts[e]}));
  }

  const std::vector<EstimatorKind> nesting{EstimatorKind::rv, EstimatorKind::bv, EstimatorKind::tsrv,
                                           EstimatorKind::rk, EstimatorKind::jwtsrv};
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (EstimatorKind k : nesting) {
    if (!contains(cfg.estimators, k)) continue;
    const auto idx = static_cast<std::size_t>(std::find(cfg.estimators.begin(), cfg.estimators.end(), k) -
                                              cfg.estimators.begin());
    names.push_back(tag(k));
    columns.push_back(forecasts[idx]);
    if (columns.size() >= 2) report.joint.push_back(mincer_zarnowitz(truth, names, columns));
  }
  report.truth = std::move(truth);
  report.forecasts = std::move(forecasts);
  return report;
}

Moments sample_moments(std::span<const double> x) {
  Moments m;
  m.count = x.size();
  if (x.empty()) return m;
  m.mean = compensated_mean(x);
  CompensatedSum s2, s3, s4;
  for (double v : x) {
    const double d = v - m.mean;
    s2.add(d * d);
    s3.add(d * d * d);
    s4.add(d * d * d * d);
  }
  const double n = static_cast<double>(x.size());
  const double var = s2.value() / n;
  m.sd = x.size() > 1 ? std::sqrt(s2.value() / (n - 1.0)) : 0.0;
  if (var > 0.0) {
    m.skewness = s3.value() / n / std::pow(var, 1.5);
    m.kurtosis = s4.value() / n / (var * var);
  }
  return m;
}

void write_bias_csv(std::ostream& out, const BiasTable& table) {
  const auto old_precision = out.precision(10);
  out << "model,paths,noise_sd,jump_level,estimator,bias,variance\n";
  for (const BiasCell& c : table.cells) {
    for (std::size_t e = 0; e < table.estimators.size(); ++e) {
      out << table.model << ',' << table.paths << ',' << c.noise_sd << ',' << c.jump_level << ','
          << tag(table.estimators[e]) << ',' << c.mean_bias[e] << ',' << c.variance[e] << '\n';
    }
  }
  out.precision(old_precision);
}

void write_bias_text(std::ostream& out, const BiasTable& table) {
  constexpr int kCell = 20;
  out << "Bias (variance) x1e4, annualized; model " << table.model << ", " << table.paths << " paths\n";
  out << std::setw(14) << "";
  for (EstimatorKind k : table.estimators) out << std::setw(kCell) << tag(k);
  out << '\n';
  double current = -1.0;
  for (const BiasCell& c : table.cells) {
    if (c.jump_level != current) {
      current = c.jump_level;
      out << "  " << jump_label(current) << '\n';
    }
    out << std::setw(14) << std::left << noise_label(c.noise_sd) << std::right;
    for (std::size_t e = 0; e < table.estimators.size(); ++e) {
      out << std::setw(kCell) << (fixed(c.mean_bias[e], 2) + " (" + fixed(c.variance[e], 2) + ")");
    }
    out << '\n';
  }
}

void write_forecast_csv(std::ostream& out, const ForecastReport& report) {
  const auto old_precision = out.precision(10);
  out << "block,regression,term,coefficient,std_error,r_squared,observations\n";
  auto emit = [&](const char* block, const RegressionReport& r) {
    for (std::size_t i = 0; i < r.fit.coefficients.size(); ++i) {
      out << block << ',' << r.label << ',' << (i == 0 ? std::string("const") : r.regressors[i - 1]) << ','
          << r.fit.coefficients[i] << ',' << r.fit.standard_errors[i] << ',' << r.fit.r_squared << ','
          << r.fit.observations << '\n';
    }
  };
  for (const auto& r : report.joint) emit("joint", r);
  for (const auto& r : report.individual) emit("individual", r);
  for (std::size_t e = 0; e < report.estimators.size(); ++e) {
    out << "ar1," << tag(report.estimators[e]) << ",a," << report.mean_ar1[e].a << ",,,\n";
    out << "ar1," << tag(report.estimators[e]) << ",b," << report.mean_ar1[e].b << ",,,\n";
  }
  out.precision(old_precision);
}

void write_forecast_text(std::ostream& out, const ForecastReport& report) {
  constexpr int kCell = 18;
  out << "Out-of-sample Mincer-Zarnowitz regressions; " << report.paths << " paths, noise " << report.noise_sd
      << ", jumps/day " << report.jump_level << "\nOLS standard errors in parentheses\n";
  std::vector<std::string> columns;
  for (EstimatorKind k : report.estimators) columns.push_back(tag(k));
  auto header = [&] {
    out << std::setw(10) << "" << std::setw(kCell) << "const.";
    for (const auto& c : columns) out << std::setw(kCell) << c;
    out << std::setw(8) << "R2" << '\n';
  };
  auto row = [&](const std::string& label, const RegressionReport& r) {
    out << std::setw(10) << std::left << label << std::right;
    auto cell = [&](std::size_t i) { return fixed(r.fit.coefficients[i], 3) + " (" + fixed(r.fit.standard_errors[i], 3) + ")"; };
    out << std::setw(kCell) << cell(0);
    for (const auto& c : columns) {
      const auto it = std::find(r.regressors.begin(), r.regressors.end(), c);
      out << std::setw(kCell)
          << (it == r.regressors.end() ? std::string() : cell(static_cast<std::size_t>(it - r.regressors.begin()) + 1));
    }
    out << std::setw(8) << fixed(r.fit.r_squared, 3) << '\n';
  };
  out << "\nJoint\n";
  header();
  for (const auto& r : report.joint) row("", r);
  out << "\nIndividual\n";
  header();
  for (const auto& r : report.individual) row(r.label, r);
  out << "\nAR(1) mean coefficients\n";
  for (std::size_t e = 0; e < report.estimators.size(); ++e) {
    out << std::setw(10) << std::left << columns[e] << std::right << " a=" << fixed(report.mean_ar1[e].a, 5)
        << " b=" << fixed(report.mean_ar1[e].b, 5) << '\n';
  }
}

std::string bias_svg(const BiasTable& table, double jump_level) {
  std::vector<std::string> categories;
  std::vector<svg::Series> series;
  for (EstimatorKind k : table.estimators) series.push_back({tag(k), {}, {}});
  for (const BiasCell& c : table.cells) {
    if (c.jump_level != jump_level) continue;
    categories.push_back(noise_label(c.noise_sd));
    for (std::size_t e = 0; e < table.estimators.size(); ++e) series[e].y.push_back(c.mean_bias[e]);
  }
  return svg::bar_chart("Bias x1e4, " + table.model + ", " + jump_label(jump_level), categories, series);
}

std::string forecast_svg(const ForecastReport& report, EstimatorKind kind) {
  const auto it = std::find(report.estimators.begin(), report.estimators.end(), kind);
  if (it == report.estimators.end()) {
    throw Error(ErrorCode::invalid_config, "estimator " + std::string(to_string(kind)) + " not in report");
  }
  const auto& f = report.forecasts[static_cast<std::size_t>(it - report.estimators.begin())];
  return svg::scatter_chart(tag(kind) + " forecast vs true IV", "forecast", "true IV", f, report.truth);
}

}  // namespace wavevol
