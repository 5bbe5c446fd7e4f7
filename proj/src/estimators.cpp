// SPDX-License-Identifier: Apache-2.0
#include "wavevol/estimators.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "wavevol/error.hpp"
#include "wavevol/modwt.hpp"
#include "wavevol/simd/kernels.hpp"

namespace wavevol {
namespace {

constexpr std::array<EstimatorKind, 8> kAll{EstimatorKind::rv,       EstimatorKind::bv,
                                            EstimatorKind::tsrv,     EstimatorKind::tsrv_opt,
                                            EstimatorKind::rk,       EstimatorKind::wrv,
                                            EstimatorKind::jwtsrv,   EstimatorKind::jwtsrv_opt};

std::vector<double> diff(std::span<const double> prices) {
  std::vector<double> r;
  if (prices.size() < 2) return r;
  r.resize(prices.size() - 1);
  for (std::size_t i = 0; i + 1 < prices.size(); ++i) r[i] = prices[i + 1] - prices[i];
  return r;
}

// Returns of prices[offset], prices[offset + stride], ...
void strided_returns(std::span<const double> prices, std::size_t offset, std::size_t stride,
                     std::vector<double>& out) {
  out.clear();
  for (std::size_t i = offset + stride; i < prices.size(); i += stride) {
    out.push_back(prices[i] - prices[i - stride]);
  }
}

struct TwoScaleParts {
  double n = 0.0;
  double nbar = 0.0;
  double rv_all = 0.0;
};

TwoScaleParts two_scale_parts(std::span<const double> prices, std::size_t grids) {
  if (grids < 1) throw Error(ErrorCode::invalid_config, "grid count must be >= 1");
  if (prices.size() < 2) throw Error(ErrorCode::too_few_ticks, "need at least two prices");
  const std::size_t n = prices.size() - 1;
  if (n < 2 * grids) {
    throw Error(ErrorCode::too_few_ticks,
                "n=" + std::to_string(n) + " returns < 2G=" + std::to_string(2 * grids));
  }
  TwoScaleParts parts;
  parts.n = static_cast<double>(n);
  parts.nbar = static_cast<double>(n - grids + 1) / static_cast<double>(grids);
  parts.rv_all = simd::sum_squares(diff(prices));
  return parts;
}

double small_sample_factor(const TwoScaleParts& p, bool enabled) {
  if (!enabled) return 1.0;
  const double keep = 1.0 - p.nbar / p.n;
  if (!(keep > 0.0)) {
    throw Error(ErrorCode::invalid_config, "small-sample adjustment undefined for G=1");
  }
  return 1.0 / keep;
}

std::string format_span(double seconds) {
  std::ostringstream os;
  if (seconds >= 60.0) {
    os << seconds / 60.0 << 'm';
  } else {
    os << seconds << 's';
  }
  return os.str();
}

}  // namespace

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::rv: return "RV";
    case EstimatorKind::bv: return "BV";
    case EstimatorKind::tsrv: return "TSRV";
    case EstimatorKind::tsrv_opt: return "TSRVopt";
    case EstimatorKind::rk: return "RK";
    case EstimatorKind::wrv: return "WRV";
    case EstimatorKind::jwtsrv: return "JWTSRV";
    case EstimatorKind::jwtsrv_opt: return "JWTSRVopt";
  }
  return "?";
}

EstimatorKind estimator_from_name(std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
  };
  const std::string wanted = lower(name);
  for (EstimatorKind k : kAll) {
    if (lower(to_string(k)) == wanted) return k;
  }
  std::string valid;
  for (EstimatorKind k : kAll) {
    if (!valid.empty()) valid += ", ";
    valid += to_string(k);
  }
  throw Error(ErrorCode::usage_error, "unknown estimator '" + std::string(name) + "'; valid: " + valid);
}

std::vector<EstimatorKind> all_estimators() { return {kAll.begin(), kAll.end()}; }

ReturnGrid sparse_grid(std::span<const double> log_prices, std::size_t stride, double interval,
                       std::string day) {
  if (stride < 1) throw Error(ErrorCode::invalid_config, "stride must be >= 1");
  ReturnGrid g;
  g.day = std::move(day);
  g.sampling_interval = interval;
  g.n_ticks_underlying = log_prices.size();
  strided_returns(log_prices, 0, stride, g.returns);
  return g;
}

VarianceEstimate rv(const ReturnGrid& grid) {
  VarianceEstimate e;
  e.estimator = EstimatorKind::rv;
  e.value = simd::sum_squares(grid.returns);
  return e;
}

VarianceEstimate bv(const ReturnGrid& grid, std::size_t stagger) {
  const std::size_t lag = 1 + stagger;
  VarianceEstimate e;
  e.estimator = EstimatorKind::bv;
  if (grid.size() > lag) {
    const std::span<const double> r(grid.returns);
    const double mu1 = std::sqrt(2.0 / std::numbers::pi);
    e.value = simd::abs_dot(r.subspan(lag), r.first(r.size() - lag)) / (mu1 * mu1);
  }
  return e;
}

VarianceEstimate tsrv(std::span<const double> log_prices, const TwoScaleOptions& options) {
  const TwoScaleParts p = two_scale_parts(log_prices, options.grids);
  std::vector<double> sub;
  double avg = 0.0;
  for (std::size_t g = 0; g < options.grids; ++g) {
    strided_returns(log_prices, g, options.grids, sub);
    avg += simd::sum_squares(sub);
  }
  avg /= static_cast<double>(options.grids);

  const double correction = options.noise_correction ? (p.nbar / p.n) * p.rv_all : 0.0;
  VarianceEstimate e;
  e.estimator = EstimatorKind::tsrv;
  e.grids = options.grids;
  e.small_sample_adjusted = options.small_sample;
  e.value = small_sample_factor(p, options.small_sample) * (avg - correction);
  return e;
}

std::size_t optimal_grid_count(std::span<const double> log_prices, std::size_t slow_stride) {
  if (log_prices.size() < 101) {
    throw Error(ErrorCode::too_few_ticks, "optimal grid selection needs n >= 100 returns");
  }
  const std::size_t n = log_prices.size() - 1;
  const std::size_t upper = n / 2;
  const double noise = simd::sum_squares(diff(log_prices)) / (2.0 * static_cast<double>(n));
  std::vector<double> slow;
  strided_returns(log_prices, 0, std::max<std::size_t>(1, slow_stride), slow);
  const double quarticity = static_cast<double>(slow.size()) / 3.0 * simd::sum_fourth(slow);
  if (!(noise > 0.0) || !(quarticity > 0.0)) return 2;

  const double g = std::round(std::cbrt(12.0 * noise * noise / quarticity) *
                              std::pow(static_cast<double>(n), 2.0 / 3.0));
  if (!(g >= 2.0)) return 2;
  return std::min<std::size_t>(upper, static_cast<std::size_t>(g));
}

double kernel_weight(Kernel kernel, double x) {
  x = std::fabs(x);
  if (x > 1.0) return 0.0;
  switch (kernel) {
    case Kernel::parzen:
      return x <= 0.5 ? 1.0 - 6.0 * x * x + 6.0 * x * x * x : 2.0 * std::pow(1.0 - x, 3);
    case Kernel::bartlett:
      return 1.0 - x;
  }
  return 0.0;
}

VarianceEstimate rk(const ReturnGrid& grid, Kernel kernel, std::size_t bandwidth) {
  if (bandwidth < 1) throw Error(ErrorCode::bandwidth_too_large, "bandwidth must be >= 1");
  const std::size_t n = grid.size();
  if (n <= 2 * bandwidth) {
    throw Error(ErrorCode::bandwidth_too_large,
                "H=" + std::to_string(bandwidth) + " needs more than " + std::to_string(2 * bandwidth) +
                    " returns, got " + std::to_string(n));
  }
  const std::span<const double> r(grid.returns);
  double value = simd::sum_squares(r);
  const double H = static_cast<double>(bandwidth);
  for (std::size_t h = 1; h <= bandwidth; ++h) {
    const double w = kernel_weight(kernel, static_cast<double>(h - 1) / H);
    if (w == 0.0) continue;
    value += 2.0 * w * simd::dot(r.subspan(h), r.first(n - h));
  }
  VarianceEstimate e;
  e.estimator = EstimatorKind::rk;
  e.value = value;
  return e;
}

std::size_t rk_bandwidth(double noise_variance, double integrated_quarticity, std::size_t m) {
  constexpr double kParzenConstant = 3.5134;
  if (!(noise_variance > 0.0) || !(integrated_quarticity > 0.0) || m == 0) return 1;
  const double xi2 = noise_variance / std::sqrt(integrated_quarticity);
  const double h = kParzenConstant * std::pow(xi2, 0.4) * std::pow(static_cast<double>(m), 0.6);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(h)));
}

VarianceEstimate wrv(const ReturnGrid& grid, WaveletSpec spec, int levels) {
  const ModwtDecomposition d = transform(grid.returns, spec, levels);
  VarianceEstimate e;
  e.estimator = EstimatorKind::wrv;
  e.per_scale = energy_by_scale(d);
  for (double v : e.per_scale) e.value += v;
  return e;
}

VarianceEstimate jwtsrv(std::span<const double> log_prices, const JwtsrvOptions& options,
                        JumpReport* report_out) {
  const bool flat = std::adjacent_find(log_prices.begin(), log_prices.end(), std::not_equal_to<>()) ==
                    log_prices.end();
  JumpReport report;
  if (!flat) report = detect_jumps(log_prices, options.jumps);
  const std::vector<double> adjusted = jump_adjust(log_prices, report);

  const std::size_t grids =
      options.grids ? *options.grids : optimal_grid_count(adjusted, options.slow_stride);
  const TwoScaleParts p = two_scale_parts(adjusted, grids);

  std::vector<double> avg(static_cast<std::size_t>(options.levels) + 1, 0.0);
  std::vector<double> sub;
  for (std::size_t g = 0; g < grids; ++g) {
    strided_returns(adjusted, g, grids, sub);
    const std::vector<double> energy = energy_by_scale(transform(sub, options.spec, options.levels));
    for (std::size_t j = 0; j < avg.size(); ++j) avg[j] += energy[j];
  }
  double total = 0.0;
  for (double& v : avg) {
    v /= static_cast<double>(grids);
    total += v;
  }

  const double correction = options.noise_correction ? (p.nbar / p.n) * p.rv_all : 0.0;
  const double factor = small_sample_factor(p, options.small_sample);

  VarianceEstimate e;
  e.estimator = options.grids ? EstimatorKind::jwtsrv : EstimatorKind::jwtsrv_opt;
  e.grids = grids;
  e.small_sample_adjusted = options.small_sample;
  e.jump_variation = report.jump_variation;
  e.value = factor * (total - correction);
  e.per_scale.resize(avg.size(), 0.0);
  if (total > 0.0) {
    const double keep = 1.0 - correction / total;
    for (std::size_t j = 0; j < avg.size(); ++j) e.per_scale[j] = factor * avg[j] * keep;
  }
  if (report_out) *report_out = report;
  return e;
}

VarianceEstimate estimate(EstimatorKind kind, std::span<const double> log_prices,
                          const EstimatorSettings& settings, JumpReport* report) {
  const double slow_interval = settings.fast_interval * static_cast<double>(settings.slow_stride);
  auto slow = [&] { return sparse_grid(log_prices, settings.slow_stride, slow_interval); };
  auto jwtsrv_options = [&](bool optimal) {
    JwtsrvOptions o;
    o.spec = settings.spec;
    o.levels = settings.levels;
    o.slow_stride = settings.slow_stride;
    o.small_sample = settings.small_sample;
    o.jumps = settings.jumps;
    if (optimal) {
      o.grids.reset();
    } else {
      o.grids = settings.two_scale_grids();
    }
    return o;
  };

  switch (kind) {
    case EstimatorKind::rv:
      return rv(slow());
    case EstimatorKind::bv:
      return bv(slow(), settings.bv_stagger);
    case EstimatorKind::tsrv:
    case EstimatorKind::tsrv_opt: {
      TwoScaleOptions o;
      o.small_sample = settings.small_sample;
      o.grids = kind == EstimatorKind::tsrv ? settings.two_scale_grids()
                                            : optimal_grid_count(log_prices, settings.slow_stride);
      VarianceEstimate e = tsrv(log_prices, o);
      e.estimator = kind;
      return e;
    }
    case EstimatorKind::rk: {
      const ReturnGrid g = slow();
      std::size_t h = 0;
      if (settings.rk_bandwidth) {
        h = *settings.rk_bandwidth;
      } else {
        const std::vector<double> r = diff(log_prices);
        const double noise = r.empty() ? 0.0 : simd::sum_squares(r) / (2.0 * static_cast<double>(r.size()));
        const double sparse = simd::sum_squares(g.returns);
        h = rk_bandwidth(noise, sparse * sparse, g.size());
      }
      return rk(g, settings.kernel, h);
    }
    case EstimatorKind::wrv:
      return wrv(slow(), settings.spec, settings.levels);
    case EstimatorKind::jwtsrv:
    case EstimatorKind::jwtsrv_opt:
      return jwtsrv(log_prices, jwtsrv_options(kind == EstimatorKind::jwtsrv_opt), report);
  }
  throw Error(ErrorCode::usage_error, "unknown estimator");
}

std::vector<std::string> default_horizon_labels(double base_interval_seconds, int levels) {
  std::vector<std::string> labels;
  double lo = base_interval_seconds;
  for (int j = 1; j <= levels; ++j) {
    labels.push_back(format_span(lo) + "-" + format_span(2.0 * lo));
    lo *= 2.0;
  }
  labels.push_back(format_span(lo) + "-1d");
  return labels;
}

std::vector<HorizonComponent> decompose_horizons(const VarianceEstimate& estimate,
                                                 std::span<const std::string> labels) {
  if (!estimate.has_per_scale()) {
    throw Error(ErrorCode::missing_per_scale,
                std::string(to_string(estimate.estimator)) + " estimate carries no per-scale components");
  }
  if (labels.size() != estimate.per_scale.size()) {
    throw Error(ErrorCode::config_error, "horizon map has " + std::to_string(labels.size()) +
                                             " labels for " + std::to_string(estimate.per_scale.size()) +
                                             " scales");
  }
  std::vector<HorizonComponent> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& c) { return c.label == labels[i]; });
    if (it == out.end()) {
      out.push_back({labels[i], estimate.per_scale[i]});
    } else {
      it->value += estimate.per_scale[i];
    }
  }
  return out;
}

}  // namespace wavevol
