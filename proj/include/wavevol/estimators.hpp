// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavevol/jumps.hpp"
#include "wavevol/wavelet_filters.hpp"

namespace wavevol {

/// Variance is per day in squared log-return units; reporting multiplies by
/// this factor (and takes √ for volatility).
inline constexpr double kTradingDaysPerYear = 252.0;

enum class EstimatorKind { rv, bv, tsrv, tsrv_opt, rk, wrv, jwtsrv, jwtsrv_opt };

std::string_view to_string(EstimatorKind kind) noexcept;
/// Tags: RV, BV, TSRV, TSRVopt, RK, WRV, JWTSRV, JWTSRVopt (case-insensitive).
/// Unknown names raise usage-error listing the valid tags.
EstimatorKind estimator_from_name(std::string_view name);
std::vector<EstimatorKind> all_estimators();

/// Uniformly sampled log returns of one session.
struct ReturnGrid {
  std::string day;
  std::vector<double> returns;
  double sampling_interval = 0.0;  // seconds
  std::size_t n_ticks_underlying = 0;

  std::size_t size() const { return returns.size(); }
};

/// Returns of prices[0], prices[stride], prices[2*stride], ...
ReturnGrid sparse_grid(std::span<const double> log_prices, std::size_t stride, double interval = 0.0,
                       std::string day = {});

struct VarianceEstimate {
  EstimatorKind estimator = EstimatorKind::rv;
  double value = 0.0;
  /// J+1 entries (wavelet scales 1..J, then the scaling part) or empty.
  std::vector<double> per_scale;
  std::optional<double> jump_variation;
  std::optional<std::size_t> grids;
  bool small_sample_adjusted = false;

  bool has_per_scale() const { return !per_scale.empty(); }
};

VarianceEstimate rv(const ReturnGrid& grid);

/// μ₁⁻² Σ_i |r_i| |r_{i-1-stagger}|, μ₁ = √(2/π).
VarianceEstimate bv(const ReturnGrid& grid, std::size_t stagger = 0);

/// Shared two-scale settings. `grids` offset subgrids of stride `grids`;
/// n̄ = (n - G + 1)/G.
struct TwoScaleOptions {
  std::size_t grids = 300;
  bool small_sample = true;
  bool noise_correction = true;
};

/// (1/G) Σ_g RV_g - (n̄/n) RV_all, optionally scaled by (1 - n̄/n)⁻¹.
VarianceEstimate tsrv(std::span<const double> log_prices, const TwoScaleOptions& options);

/// Subgrid count minimising the asymptotic variance of the two-scale
/// estimator: G* = (12 η̂⁴ / IQ)^{1/3} n^{2/3} with η̂² = RV_all / (2n) and
/// IQ the realized quarticity on the `slow_stride` grid, clamped to [2, n/2].
std::size_t optimal_grid_count(std::span<const double> log_prices, std::size_t slow_stride);

enum class Kernel { parzen, bartlett };

double kernel_weight(Kernel kernel, double x);

/// γ₀ + Σ_{h=1}^{H} k((h-1)/H)(γ_h + γ_{-h}), γ_h = Σ_i r_i r_{i-h}.
VarianceEstimate rk(const ReturnGrid& grid, Kernel kernel, std::size_t bandwidth);

/// ⌈c* ξ^{4/5} m^{3/5}⌉ with ξ² = ω² / √IQ and c* = 3.5134 (Parzen).
std::size_t rk_bandwidth(double noise_variance, double integrated_quarticity, std::size_t m);

/// Σ_j ‖W̃_j‖² + ‖Ṽ_J‖² of the MODWT of the grid returns, with the
/// energies as per_scale.
VarianceEstimate wrv(const ReturnGrid& grid, WaveletSpec spec, int levels);

struct JwtsrvOptions {
  WaveletSpec spec = WaveletSpec::d4();
  int levels = 4;
  /// Subgrid count; empty selects optimal_grid_count on the adjusted path.
  std::optional<std::size_t> grids = 300;
  /// Slow-grid stride used for the quarticity in automatic G selection.
  std::size_t slow_stride = 300;
  bool small_sample = true;
  bool noise_correction = true;
  JumpOptions jumps;
};

/// Jump-adjusted wavelet two-scale realized variance. Jumps are detected on
/// the full path and removed; subgrid wavelet energies are averaged and the
/// noise correction (n̄/n) RV_all is spread over scales in proportion to
/// their share, so Σ per_scale = value.
VarianceEstimate jwtsrv(std::span<const double> log_prices, const JwtsrvOptions& options,
                        JumpReport* report = nullptr);

/// Everything needed to run any estimator on one day of log prices sampled
/// on a fast grid. Sparse estimators (RV, BV, RK, WRV) use every
/// `slow_stride`-th price.
struct EstimatorSettings {
  std::size_t slow_stride = 300;
  double fast_interval = 1.0;  // seconds between fast-grid prices
  std::size_t bv_stagger = 1;
  Kernel kernel = Kernel::parzen;
  /// Fixed RK bandwidth; empty picks rk_bandwidth from the day's data.
  std::optional<std::size_t> rk_bandwidth;
  WaveletSpec spec = WaveletSpec::d4();
  int levels = 4;
  /// Two-scale subgrid count; empty uses slow_stride.
  std::optional<std::size_t> grids;
  bool small_sample = true;
  JumpOptions jumps;

  std::size_t two_scale_grids() const { return grids.value_or(slow_stride); }
};

/// Runs one estimator on one day. `report` receives the jump report for the
/// JWTSRV variants.
VarianceEstimate estimate(EstimatorKind kind, std::span<const double> log_prices,
                          const EstimatorSettings& settings, JumpReport* report = nullptr);

struct HorizonComponent {
  std::string label;
  double value = 0.0;
};

/// Labels for scales of a base grid: scale j spans [Δ 2^{j-1}, Δ 2^j], the
/// scaling part everything slower ("5-10m", …, "80m-1d").
std::vector<std::string> default_horizon_labels(double base_interval_seconds, int levels);

/// Groups per-scale components by label (labels[i] names scale i); scales
/// sharing a label are summed. Components appear in first-label order.
std::vector<HorizonComponent> decompose_horizons(const VarianceEstimate& estimate,
                                                 std::span<const std::string> labels);

}  // namespace wavevol
