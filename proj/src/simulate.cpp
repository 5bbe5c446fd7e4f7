// SPDX-License-Identifier: Apache-2.0
#include "wavevol/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "wavevol/error.hpp"
#include "wavevol/estimators.hpp"
#include "wavevol/fgn.hpp"

namespace wavevol {
namespace {

enum Stream : std::uint64_t { kDiffusion = 0, kJumps = 1, kNoise = 2, kVolatility = 3 };

std::vector<SimJump> draw_jumps(const SimConfig& cfg, std::uint64_t path) {
  std::vector<SimJump> jumps;
  if (cfg.jump_intensity <= 0.0) return jumps;
  std::mt19937_64 rng = path_rng(cfg.seed, path, kJumps);
  std::poisson_distribution<int> count(cfg.jump_intensity);
  std::uniform_int_distribution<std::size_t> where(0, cfg.steps - 1);
  std::normal_distribution<double> size(0.0, cfg.sigma_jump);
  const int fixed = static_cast<int>(std::lround(cfg.jump_intensity));
  for (std::size_t d = 0; d < cfg.days; ++d) {
    const int k = cfg.jump_mode == JumpMode::fixed ? fixed : count(rng);
    for (int i = 0; i < k; ++i) {
      const std::size_t step = d * cfg.steps + where(rng);
      jumps.push_back({step, size(rng)});
    }
  }
  std::stable_sort(jumps.begin(), jumps.end(), [](const SimJump& a, const SimJump& b) { return a.step < b.step; });
  return jumps;
}

SimPath allocate(const SimConfig& cfg) {
  SimPath path;
  path.steps_per_day = cfg.steps;
  const std::size_t total = cfg.steps * cfg.days;
  path.latent.assign(total + 1, 0.0);
  path.variance.assign(total + 1, 0.0);
  path.true_iv.assign(cfg.days, 0.0);
  path.true_jump_variation.assign(cfg.days, 0.0);
  path.variance[0] = cfg.initial_variance();
  return path;
}

void finish(const SimConfig& cfg, std::uint64_t index, SimPath& path) {
  for (const SimJump& j : path.jumps) path.true_jump_variation[j.step / cfg.steps] += j.size * j.size;
  path.observed = add_noise(path.latent, cfg.noise_sd, cfg.seed, index);
}

}  // namespace

std::string_view to_string(Model model) noexcept {
  return model == Model::heston_jd ? "heston" : "fsv";
}

Model model_from_name(std::string_view text) {
  std::string name(text);
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  if (name == "heston" || name == "heston_jd") return Model::heston_jd;
  if (name == "fsv" || name == "fractional" || name == "fractional_sv") return Model::fractional_sv;
  throw Error(ErrorCode::invalid_config, "unknown model '" + std::string(name) + "' (heston, fsv)");
}

SimConfig SimConfig::heston() { return {}; }

SimConfig SimConfig::fractional(double hurst) {
  SimConfig cfg;
  cfg.model = Model::fractional_sv;
  cfg.alpha = 0.2;
  cfg.kappa = 20.0;
  cfg.gamma = 0.012;
  cfg.rho = 0.0;
  cfg.hurst = hurst;
  return cfg;
}

double SimConfig::dt() const { return 1.0 / (kTradingDaysPerYear * static_cast<double>(steps)); }

void SimConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::invalid_config, what); };
  if (model == Model::fractional_sv && !(hurst > 0.0 && hurst <= 1.0)) {
    throw Error(ErrorCode::invalid_hurst, "H must lie in (0, 1], got " + std::to_string(hurst));
  }
  if (steps < 2) fail("steps must be >= 2");
  if (days < 1) fail("days must be >= 1");
  if (!(alpha >= 0.0)) fail("alpha must be >= 0");
  if (!(kappa >= 0.0)) fail("kappa must be >= 0");
  if (!(gamma >= 0.0)) fail("gamma must be >= 0");
  if (!(rho >= -1.0 && rho <= 1.0)) fail("rho must lie in [-1, 1]");
  if (!(sigma_jump >= 0.0)) fail("sigma_jump must be >= 0");
  if (!(jump_intensity >= 0.0)) fail("jump intensity must be >= 0");
  if (!(noise_sd >= 0.0)) fail("noise_sd must be >= 0");
  if (!std::isfinite(mu)) fail("mu must be finite");
}

std::span<const double> SimPath::latent_day(std::size_t d) const {
  return std::span<const double>(latent).subspan(d * steps_per_day, steps_per_day + 1);
}

std::span<const double> SimPath::observed_day(std::size_t d) const {
  return std::span<const double>(observed).subspan(d * steps_per_day, steps_per_day + 1);
}

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

SimPath simulate_heston_jd(const SimConfig& cfg, std::uint64_t index) {
  cfg.validate();
  SimPath path = allocate(cfg);
  path.jumps = draw_jumps(cfg, index);

  std::mt19937_64 rng = path_rng(cfg.seed, index, kDiffusion);
  std::normal_distribution<double> normal;
  const double dt = cfg.dt();
  const double sqrt_dt = std::sqrt(dt);
  const double rho_perp = std::sqrt(1.0 - cfg.rho * cfg.rho);
  auto next_jump = path.jumps.begin();

  const std::size_t total = cfg.steps * cfg.days;
  for (std::size_t i = 0; i < total; ++i) {
    const double v = std::max(path.variance[i], 0.0);
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    const double vol = std::sqrt(v) * sqrt_dt;
    double x = path.latent[i] + (cfg.mu - 0.5 * v) * dt + vol * z1;
    for (; next_jump != path.jumps.end() && next_jump->step == i; ++next_jump) x += next_jump->size;
    path.latent[i + 1] = x;
    path.variance[i + 1] = path.variance[i] + cfg.kappa * (cfg.alpha - v) * dt +
                           cfg.gamma * vol * (cfg.rho * z1 + rho_perp * z2);
    path.true_iv[i / cfg.steps] += v * dt;
  }
  finish(cfg, index, path);
  return path;
}

SimPath simulate_fsv(const SimConfig& cfg, std::uint64_t index) {
  cfg.validate();
  if (cfg.model != Model::fractional_sv) {
    throw Error(ErrorCode::invalid_config, "simulate_fsv needs the fractional model");
  }
  SimPath path = allocate(cfg);
  path.jumps = draw_jumps(cfg, index);

  const std::size_t total = cfg.steps * cfg.days;
  std::vector<double> shocks(total);
  {
    std::mt19937_64 vrng = path_rng(cfg.seed, index, kVolatility);
    FgnGenerator gen(total, cfg.hurst);
    gen.generate(vrng, shocks, {});
  }

  std::mt19937_64 rng = path_rng(cfg.seed, index, kDiffusion);
  std::normal_distribution<double> normal;
  const double dt = cfg.dt();
  const double sqrt_dt = std::sqrt(dt);
  const double vol_step = cfg.gamma * std::pow(dt, cfg.hurst);
  auto next_jump = path.jumps.begin();

  for (std::size_t i = 0; i < total; ++i) {
    const double v = std::max(path.variance[i], 0.0);
    double x = path.latent[i] + (cfg.mu - 0.5 * v) * dt + std::sqrt(v) * sqrt_dt * normal(rng);
    for (; next_jump != path.jumps.end() && next_jump->step == i; ++next_jump) x += next_jump->size;
    path.latent[i + 1] = x;
    path.variance[i + 1] = path.variance[i] + cfg.kappa * (cfg.alpha - v) * dt + vol_step * shocks[i];
    path.true_iv[i / cfg.steps] += v * dt;
  }
  finish(cfg, index, path);
  return path;
}

SimPath simulate(const SimConfig& cfg, std::uint64_t path) {
  return cfg.model == Model::heston_jd ? simulate_heston_jd(cfg, path) : simulate_fsv(cfg, path);
}

std::vector<double> add_noise(std::span<const double> p, double noise_sd, std::mt19937_64& rng) {
  if (!(noise_sd >= 0.0)) throw Error(ErrorCode::invalid_config, "noise_sd must be >= 0");
  std::vector<double> y(p.begin(), p.end());
  if (noise_sd == 0.0) return y;
  std::normal_distribution<double> normal;
  for (double& v : y) v += noise_sd * normal(rng);
  return y;
}

std::vector<double> add_noise(std::span<const double> p, double noise_sd, std::uint64_t seed,
                              std::uint64_t path) {
  std::mt19937_64 rng = path_rng(seed, path, kNoise);
  return add_noise(p, noise_sd, rng);
}

void write_path_csv(std::ostream& out, const SimPath& path) {
  const auto old_precision = out.precision(17);
  out << "step,p,y,variance\n";
  for (std::size_t i = 0; i < path.latent.size(); ++i) {
    out << i << ',' << path.latent[i] << ',' << path.observed[i] << ',' << path.variance[i] << '\n';
  }
  out.precision(old_precision);
}

void write_path_metadata(std::ostream& out, const SimConfig& cfg, std::uint64_t path_index,
                         const SimPath& path) {
  nlohmann::ordered_json j;
  j["model"] = std::string(to_string(cfg.model));
  j["path"] = path_index;
  j["seed"] = cfg.seed;
  j["config"] = {{"mu", cfg.mu},
                 {"alpha", cfg.alpha},
                 {"kappa", cfg.kappa},
                 {"gamma", cfg.gamma},
                 {"rho", cfg.rho},
                 {"hurst", cfg.hurst},
                 {"sigma_jump", cfg.sigma_jump},
                 {"jump_intensity", cfg.jump_intensity},
                 {"jump_mode", cfg.jump_mode == JumpMode::fixed ? "fixed" : "poisson"},
                 {"noise_sd", cfg.noise_sd},
                 {"v0", cfg.initial_variance()},
                 {"steps", cfg.steps},
                 {"days", cfg.days}};
  j["true_iv"] = path.true_iv;
  j["true_jump_variation"] = path.true_jump_variation;
  nlohmann::ordered_json jumps = nlohmann::ordered_json::array();
  for (const SimJump& jump : path.jumps) jumps.push_back({{"step", jump.step}, {"size", jump.size}});
  j["jumps"] = jumps;
  out << j.dump(2) << '\n';
}

}  // namespace wavevol
