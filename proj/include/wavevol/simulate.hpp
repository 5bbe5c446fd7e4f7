// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace wavevol {

enum class Model { heston_jd, fractional_sv };
/// poisson: Poisson(λ) jumps per day; fixed: exactly round(λ) jumps per day.
enum class JumpMode { poisson, fixed };

std::string_view to_string(Model model) noexcept;
Model model_from_name(std::string_view name);

/// Parameters are annualized; a day spans 1/252 of a year split into
/// `steps` Euler steps.
struct SimConfig {
  Model model = Model::heston_jd;
  double mu = 0.05;
  double alpha = 0.04;
  double kappa = 5.0;
  double gamma = 0.5;
  double rho = -0.5;
  double hurst = 0.5;
  double sigma_jump = 0.025;
  double jump_intensity = 0.0;
  JumpMode jump_mode = JumpMode::poisson;
  double noise_sd = 0.0;
  /// Initial spot variance; negative means alpha.
  double v0 = -1.0;
  std::size_t steps = 23400;
  std::size_t days = 1;
  std::uint64_t seed = 1;

  static SimConfig heston();
  static SimConfig fractional(double hurst);

  double dt() const;
  double initial_variance() const { return v0 < 0.0 ? alpha : v0; }
  void validate() const;
};

struct SimJump {
  std::size_t step = 0;  // jump lands between prices[step] and prices[step + 1]
  double size = 0.0;
};

/// A path of `days` consecutive sessions sharing endpoints: day d covers
/// prices [d·n, (d+1)·n].
struct SimPath {
  std::size_t steps_per_day = 0;
  std::vector<double> latent;
  std::vector<double> observed;
  std::vector<double> variance;
  std::vector<double> true_iv;
  std::vector<double> true_jump_variation;
  std::vector<SimJump> jumps;

  std::size_t days() const { return true_iv.size(); }
  std::span<const double> latent_day(std::size_t d) const;
  std::span<const double> observed_day(std::size_t d) const;
};

/// Independent RNG stream for (seed, path, stream); identical inputs give
/// identical streams regardless of thread scheduling.
std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path, std::uint64_t stream);

SimPath simulate_heston_jd(const SimConfig& cfg, std::uint64_t path = 0);
SimPath simulate_fsv(const SimConfig& cfg, std::uint64_t path = 0);
/// Dispatches on cfg.model and fills observed with cfg.noise_sd noise.
SimPath simulate(const SimConfig& cfg, std::uint64_t path = 0);

/// y_i = p_i + ε_i, ε i.i.d. N(0, sd²).
std::vector<double> add_noise(std::span<const double> p, double noise_sd, std::mt19937_64& rng);
/// Noise from the dedicated noise stream of (seed, path): matched draws
/// across noise levels.
std::vector<double> add_noise(std::span<const double> p, double noise_sd, std::uint64_t seed,
                              std::uint64_t path);

/// step,p,y,variance
void write_path_csv(std::ostream& out, const SimPath& path);
/// Config, per-day true IV and jump variation, and jump list as JSON.
void write_path_metadata(std::ostream& out, const SimConfig& cfg, std::uint64_t path_index,
                         const SimPath& path);

}  // namespace wavevol
