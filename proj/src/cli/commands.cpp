// SPDX-License-Identifier: Apache-2.0
#include "wavevol/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "wavevol/config.hpp"
#include "wavevol/data_io.hpp"
#include "wavevol/estimators.hpp"
#include "wavevol/simulate.hpp"
#include "wavevol/study.hpp"
#include "wavevol/svg.hpp"

#ifndef WAVEVOL_VERSION
#define WAVEVOL_VERSION "0.0.0"
#endif

namespace wavevol::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr double kSimulatedDaySeconds = 23400.0;

Config load_config(const Options& o) {
  if (!o.config) return Config{};
  if (!fs::exists(*o.config)) throw Error(ErrorCode::config_not_found, o.config->string());
  return Config::load(*o.config);
}

fs::path prepare_out(const Options& o) {
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + o.out.string() + ": " + ec.message());
  return o.out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

/// Collects what a command resolved so the manifest can replay it.
class Manifest {
 public:
  Manifest(std::string command, const Options& o) : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["version"] = WAVEVOL_VERSION;
    doc_["argv"] = o.argv;
    doc_["config_file"] = o.config ? o.config->string() : "";
    doc_["inputs"] = json::array();
    if (o.input) doc_["inputs"].push_back(o.input->string());
    doc_["outputs"] = json::array();
  }

  json& resolved() { return doc_["resolved"]; }
  void seed(std::uint64_t s) { doc_["seed"] = s; }
  void output(const fs::path& p) { doc_["outputs"].push_back(p.filename().string()); }

  void write(const fs::path& dir) {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["duration_seconds"] = seconds;
    write_text(dir / "manifest.json", doc_.dump(2) + "\n");
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<EstimatorKind> resolve_estimators(const Options& o, const Config& c,
                                              const std::vector<EstimatorKind>& fallback) {
  std::vector<std::string> names = c.get_strings("estimate.estimators", {});
  if (!o.estimators.empty()) names = o.estimators;
  if (names.empty()) return fallback;
  std::vector<EstimatorKind> out;
  for (const auto& n : names) {
    std::stringstream ss(n);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(estimator_from_name(part));
    }
  }
  return out;
}

std::string display(EstimatorKind k) { return std::string(to_string(k)); }

/// Estimator settings for a fast grid spaced `fast_interval` seconds.
EstimatorSettings resolve_settings(const Options& o, const Config& c, double fast_interval,
                                   double default_slow_interval, json& resolved) {
  EstimatorSettings s;
  s.fast_interval = fast_interval;
  const double slow = o.interval.value_or(c.get_double("estimate.interval", default_slow_interval));
  const double ratio = slow / fast_interval;
  if (!(ratio >= 1.0) || std::fabs(ratio - std::round(ratio)) > 1e-9) {
    throw Error(ErrorCode::config_error, "estimate.interval: " + std::to_string(slow) +
                                             " s is not a multiple of the fast grid spacing " +
                                             std::to_string(fast_interval) + " s");
  }
  s.slow_stride = static_cast<std::size_t>(std::llround(ratio));
  s.levels = static_cast<int>(o.levels.value_or(c.get_int("estimate.levels", 4)));
  if (s.levels < 1) throw Error(ErrorCode::config_error, "estimate.levels: must be >= 1");
  s.spec = WaveletSpec::from_name(c.get_string("estimate.wavelet", "d4"));
  s.jumps.spec = s.spec;
  s.small_sample = c.get_bool("estimate.small_sample", true);
  s.bv_stagger = static_cast<std::size_t>(c.get_int("estimate.bv_stagger", 1));
  const std::string kernel = c.get_string("estimate.kernel", "parzen");
  if (kernel == "parzen") {
    s.kernel = Kernel::parzen;
  } else if (kernel == "bartlett") {
    s.kernel = Kernel::bartlett;
  } else {
    throw Error(ErrorCode::config_error, "estimate.kernel: expected parzen or bartlett");
  }
  if (const auto h = c.get_int("estimate.rk_bandwidth", 0); h > 0) s.rk_bandwidth = static_cast<std::size_t>(h);
  if (const auto g = c.get_int("estimate.grids", 0); g > 0) s.grids = static_cast<std::size_t>(g);
  if (const auto d = c.get_int("estimate.neighborhood", 0); d > 0) s.jumps.neighborhood = static_cast<std::size_t>(d);

  resolved["interval"] = slow;
  resolved["fast_interval"] = fast_interval;
  resolved["slow_stride"] = s.slow_stride;
  resolved["levels"] = s.levels;
  resolved["wavelet"] = std::string(s.spec.name());
  resolved["small_sample"] = s.small_sample;
  resolved["bv_stagger"] = s.bv_stagger;
  resolved["kernel"] = kernel;
  resolved["rk_bandwidth"] = s.rk_bandwidth ? static_cast<std::int64_t>(*s.rk_bandwidth) : 0;
  resolved["grids"] = s.two_scale_grids();
  resolved["neighborhood"] = s.jumps.neighborhood ? static_cast<std::int64_t>(*s.jumps.neighborhood) : 0;
  return s;
}

SimConfig resolve_sim(const Config& c, const std::string& section, SimConfig base, json& resolved) {
  const std::string p = section + ".";
  const std::string model = c.get_string(p + "model", std::string(to_string(base.model)));
  const Model m = model_from_name(model);
  if (m != base.model) {
    base = m == Model::heston_jd ? SimConfig::heston() : SimConfig::fractional(base.hurst);
  }
  base.mu = c.get_double(p + "mu", base.mu);
  base.alpha = c.get_double(p + "alpha", base.alpha);
  base.kappa = c.get_double(p + "kappa", base.kappa);
  base.gamma = c.get_double(p + "gamma", base.gamma);
  base.rho = c.get_double(p + "rho", base.rho);
  base.hurst = c.get_double(p + "hurst", base.hurst);
  base.sigma_jump = c.get_double(p + "sigma_jump", base.sigma_jump);
  base.jump_intensity = c.get_double(p + "jump_intensity", base.jump_intensity);
  const std::string mode = c.get_string(p + "jump_mode", base.jump_mode == JumpMode::fixed ? "fixed" : "poisson");
  if (mode == "fixed") {
    base.jump_mode = JumpMode::fixed;
  } else if (mode == "poisson") {
    base.jump_mode = JumpMode::poisson;
  } else {
    throw Error(ErrorCode::config_error, p + "jump_mode: expected poisson or fixed");
  }
  base.noise_sd = c.get_double(p + "noise_sd", base.noise_sd);
  base.v0 = c.get_double(p + "v0", base.v0);
  const auto steps = c.get_int(p + "steps", static_cast<std::int64_t>(base.steps));
  const auto days = c.get_int(p + "days", static_cast<std::int64_t>(base.days));
  if (steps < 2) throw Error(ErrorCode::config_error, p + "steps: must be >= 2");
  if (days < 1) throw Error(ErrorCode::config_error, p + "days: must be >= 1");
  base.steps = static_cast<std::size_t>(steps);
  base.days = static_cast<std::size_t>(days);
  base.seed = static_cast<std::uint64_t>(c.get_int(p + "seed", static_cast<std::int64_t>(base.seed)));
  base.validate();

  resolved["model"] = std::string(to_string(base.model));
  resolved["mu"] = base.mu;
  resolved["alpha"] = base.alpha;
  resolved["kappa"] = base.kappa;
  resolved["gamma"] = base.gamma;
  resolved["rho"] = base.rho;
  resolved["hurst"] = base.hurst;
  resolved["sigma_jump"] = base.sigma_jump;
  resolved["jump_intensity"] = base.jump_intensity;
  resolved["jump_mode"] = base.jump_mode == JumpMode::fixed ? "fixed" : "poisson";
  resolved["noise_sd"] = base.noise_sd;
  resolved["v0"] = base.initial_variance();
  resolved["steps"] = base.steps;
  resolved["days"] = base.days;
  return base;
}

std::string path_stem(std::size_t i) {
  std::ostringstream os;
  os << "path_" << std::setw(4) << std::setfill('0') << i;
  return os.str();
}

// One day of fast-grid log prices plus what the outputs need about it.
struct Day {
  std::string id;
  std::vector<double> log_prices;
  std::optional<double> session_return;
};

std::vector<double> read_column(const fs::path& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::parse_error, path.string() + ": empty file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) header.push_back(f);
  }
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw Error(ErrorCode::parse_error, path.string() + ": no column '" + column + "'");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    std::stringstream ss(line);
    std::string f;
    for (std::size_t i = 0; i <= col; ++i) std::getline(ss, f, ',');
    try {
      std::size_t used = 0;
      out.push_back(std::stod(f, &used));
      if (used != f.size()) throw std::invalid_argument(f);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, path.string() + ": row " + std::to_string(row) + ", column " +
                                              std::to_string(col + 1) + ": bad number '" + f + "'");
    }
  }
  return out;
}

std::vector<Day> load_sim_days(const fs::path& dir, double& fast_interval) {
  std::vector<fs::path> csvs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("path_", 0) == 0 && entry.path().extension() == ".csv") csvs.push_back(entry.path());
  }
  std::sort(csvs.begin(), csvs.end());
  if (csvs.empty()) throw Error(ErrorCode::io_error, dir.string() + " holds no path_*.csv files");
  std::vector<Day> days;
  std::optional<std::size_t> steps_seen;
  for (const auto& csv : csvs) {
    fs::path meta = csv;
    meta.replace_extension(".json");
    std::ifstream in(meta);
    if (!in) throw Error(ErrorCode::io_error, "missing metadata " + meta.string());
    json m;
    try {
      m = json::parse(in);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::parse_error, meta.string() + ": " + e.what());
    }
    const std::size_t steps = m.at("config").at("steps").get<std::size_t>();
    const std::size_t n_days = m.at("config").at("days").get<std::size_t>();
    if (steps_seen && *steps_seen != steps) {
      throw Error(ErrorCode::parse_error, meta.string() + ": paths disagree on steps per day");
    }
    steps_seen = steps;
    const std::vector<double> y = read_column(csv, "y");
    if (y.size() != steps * n_days + 1) {
      throw Error(ErrorCode::parse_error, csv.string() + ": expected " + std::to_string(steps * n_days + 1) + " rows");
    }
    for (std::size_t d = 0; d < n_days; ++d) {
      Day day;
      day.id = csv.stem().string() + "/d" + std::to_string(d);
      day.log_prices.assign(y.begin() + static_cast<std::ptrdiff_t>(d * steps),
                            y.begin() + static_cast<std::ptrdiff_t>((d + 1) * steps + 1));
      day.session_return = day.log_prices.back() - day.log_prices.front();
      days.push_back(std::move(day));
    }
  }
  fast_interval = kSimulatedDaySeconds / static_cast<double>(*steps_seen);
  return days;
}

SessionCalendar resolve_calendar(const Config& c, json& resolved) {
  SessionCalendar cal;
  cal.zone = c.get_string("data.exchange_zone", cal.zone);
  auto minutes = [&](const std::string& key, int fallback) {
    const std::string v = c.get_string(key, "");
    if (v.empty()) return fallback;
    int h = 0, m = 0;
    char colon = 0;
    std::istringstream is(v);
    if (!(is >> h >> colon >> m) || colon != ':' || h < 0 || h > 23 || m < 0 || m > 59) {
      throw Error(ErrorCode::config_error, key + ": expected HH:MM");
    }
    return h * 60 + m;
  };
  cal.open_minute = minutes("data.session_open", cal.open_minute);
  cal.close_minute = minutes("data.session_close", cal.close_minute);
  cal.exclude_year_end = c.get_bool("data.exclude_year_end", true);
  const std::string holidays = c.get_string("data.holidays", "");
  if (!holidays.empty()) {
    fs::path p = holidays;
    if (p.is_relative() && !c.source().empty() && c.source() != "<config>") p = fs::path(c.source()).parent_path() / p;
    cal.holidays = SessionCalendar::load_holidays(p);
  }
  resolved["exchange_zone"] = cal.zone;
  resolved["session_open_minute"] = cal.open_minute;
  resolved["session_close_minute"] = cal.close_minute;
  resolved["holidays"] = holidays;
  resolved["holiday_count"] = cal.holidays.size();
  resolved["exclude_year_end"] = cal.exclude_year_end;
  return cal;
}

std::vector<Day> load_tick_days(const fs::path& file, const Config& c, double fast_interval, json& resolved,
                                std::ostream& log) {
  TickFormat format;
  const std::string ts = c.get_string("data.timestamp_format", "auto");
  if (ts == "auto") {
    format.timestamp = TimestampFormat::automatic;
  } else if (ts == "iso8601") {
    format.timestamp = TimestampFormat::iso8601;
  } else if (ts == "epoch_ms") {
    format.timestamp = TimestampFormat::epoch_ms;
  } else {
    throw Error(ErrorCode::config_error, "data.timestamp_format: expected auto, iso8601 or epoch_ms");
  }
  format.zone = c.get_string("data.timezone", "UTC");
  format.instrument = c.get_string("data.instrument", "");
  const SessionCalendar cal = resolve_calendar(c, resolved);
  GridOptions grid;
  grid.interval = fast_interval;
  grid.min_ticks = static_cast<std::size_t>(c.get_int("data.min_ticks", 100));
  resolved["timestamp_format"] = ts;
  resolved["timezone"] = format.zone;
  resolved["min_ticks"] = grid.min_ticks;

  const TickSeries series = load_ticks(file, format);
  const GridSet set = build_grids(series, cal, grid);
  for (const auto& d : set.dropped) log << "dropped session " << d.day << ": " << d.reason << '\n';
  std::vector<Day> days;
  for (const SessionGrid& s : set.sessions) {
    Day day;
    day.id = s.day;
    day.log_prices = s.log_prices;
    day.session_return = std::log(s.close_price) - std::log(s.open_price);
    days.push_back(std::move(day));
  }
  return days;
}

void write_estimate_row(std::ostream& out, const std::string& day, const VarianceEstimate& e, int levels,
                        double interval) {
  out << day << ',' << display(e.estimator) << ',' << e.value << ',' << e.value * kTradingDaysPerYear << ',';
  if (e.jump_variation) out << *e.jump_variation;
  out << ',' << interval << ',';
  if (e.grids) out << *e.grids;
  out << ',' << (e.small_sample_adjusted ? "small_sample" : "");
  for (int j = 0; j <= levels; ++j) {
    out << ',';
    if (e.has_per_scale() && static_cast<std::size_t>(j) < e.per_scale.size()) out << e.per_scale[static_cast<std::size_t>(j)];
  }
  out << '\n';
}

// ---- estimates CSV reader for decompose ----

struct EstimateRow {
  std::string day;
  std::string estimator;
  double value = 0.0;
  double interval = 0.0;
  std::vector<std::optional<double>> per_scale;
};

std::vector<EstimateRow> read_estimates(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::parse_error, path.string() + ": empty file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) header.push_back(f);
  }
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::parse_error, path.string() + ": no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_day = col("day"), c_est = col("estimator"), c_val = col("value"), c_int = col("interval");
  std::vector<std::size_t> scale_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].rfind("scale_", 0) == 0 || header[i] == "scaling") scale_cols.push_back(i);
  }
  std::vector<EstimateRow> rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string x;
    while (std::getline(ss, x, ',')) f.push_back(x);
    f.resize(header.size());
    auto num = [&](std::size_t c) {
      try {
        return std::stod(f[c]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::parse_error, path.string() + ": row " + std::to_string(row) + ", column " +
                                                std::to_string(c + 1) + ": bad number '" + f[c] + "'");
      }
    };
    EstimateRow r;
    r.day = f[c_day];
    r.estimator = f[c_est];
    r.value = num(c_val);
    r.interval = num(c_int);
    for (std::size_t c : scale_cols) r.per_scale.push_back(f[c].empty() ? std::nullopt : std::optional(num(c)));
    rows.push_back(std::move(r));
  }
  return rows;
}

ExitCode report(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return exit_code_for(e.code());
}

}  // namespace

ExitCode exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::usage_error:
    case ErrorCode::config_error:
    case ErrorCode::config_not_found:
    case ErrorCode::invalid_config:
    case ErrorCode::invalid_hurst:
    case ErrorCode::unsupported_family:
    case ErrorCode::paths_below_minimum:
    case ErrorCode::level_too_deep:
      return kUsage;
    case ErrorCode::series_too_short:
    case ErrorCode::insufficient_coefficients:
    case ErrorCode::degenerate_scale:
    case ErrorCode::location_out_of_range:
    case ErrorCode::too_few_ticks:
    case ErrorCode::bandwidth_too_large:
    case ErrorCode::missing_per_scale:
    case ErrorCode::collinear_regressors:
    case ErrorCode::too_few_observations:
    case ErrorCode::parse_error:
    case ErrorCode::nonpositive_price:
    case ErrorCode::no_ticks_in_session:
    case ErrorCode::io_error:
      return kData;
  }
  return kInternal;
}

void cmd_simulate(const Options& o) {
  const Config c = load_config(o);
  Manifest manifest("simulate", o);
  SimConfig cfg = resolve_sim(c, "simulate", SimConfig::heston(), manifest.resolved());
  if (o.seed) cfg.seed = *o.seed;
  const std::size_t paths = o.paths.value_or(static_cast<std::size_t>(c.get_int("simulate.paths", 1)));
  c.reject_unknown("simulate");
  if (paths < 1) throw Error(ErrorCode::config_error, "simulate.paths: must be >= 1");
  manifest.resolved()["paths"] = paths;
  manifest.seed(cfg.seed);

  const fs::path dir = prepare_out(o);
  for (std::size_t i = 0; i < paths; ++i) {
    const SimPath path = simulate(cfg, i);
    const fs::path csv = dir / (path_stem(i) + ".csv");
    const fs::path meta = dir / (path_stem(i) + ".json");
    {
      auto out = open_out(csv);
      write_path_csv(out, path);
    }
    {
      auto out = open_out(meta);
      write_path_metadata(out, cfg, i, path);
    }
    manifest.output(csv);
    manifest.output(meta);
  }
  manifest.write(dir);
}

void cmd_estimate(const Options& o) {
  if (!o.input) throw Error(ErrorCode::usage_error, "estimate needs --input (tick CSV or simulate output dir)");
  if (!fs::exists(*o.input)) throw Error(ErrorCode::io_error, "input not found: " + o.input->string());
  const Config c = load_config(o);
  Manifest manifest("estimate", o);
  json& resolved = manifest.resolved();

  std::vector<Day> days;
  double fast_interval = 1.0;
  double default_slow = 300.0;
  const bool from_ticks = !fs::is_directory(*o.input);
  if (from_ticks) {
    fast_interval = c.get_double("data.fast_interval", 30.0);
    if (!(fast_interval > 0.0)) throw Error(ErrorCode::config_error, "data.fast_interval: must be positive");
    days = load_tick_days(*o.input, c, fast_interval, resolved, std::cerr);
  } else {
    days = load_sim_days(*o.input, fast_interval);
  }
  resolved["input_kind"] = from_ticks ? "ticks" : "simulated";
  const EstimatorSettings settings = resolve_settings(o, c, fast_interval, default_slow, resolved);
  const std::vector<EstimatorKind> kinds = resolve_estimators(o, c, all_estimators());
  std::vector<std::string> names;
  for (EstimatorKind k : kinds) names.push_back(display(k));
  resolved["estimators"] = names;
  c.reject_unknown("estimate");
  c.reject_unknown("data");

  const fs::path dir = prepare_out(o);
  const double slow_interval = fast_interval * static_cast<double>(settings.slow_stride);
  auto est_out = open_out(dir / "estimates.csv");
  auto jump_out = open_out(dir / "jumps.csv");
  auto std_out = open_out(dir / "standardized_returns.csv");
  est_out.precision(17);
  std_out.precision(17);
  est_out << "day,estimator,value,annualized,jump_variation,interval,grids,flags";
  for (int j = 1; j <= settings.levels; ++j) est_out << ",scale_" << j;
  est_out << ",scaling\n";
  jump_out << "day,grid_index,size,squared_size\n";
  std_out << "day,return,jwtsrv,standardized\n";

  const bool has_jwtsrv = std::find(kinds.begin(), kinds.end(), EstimatorKind::jwtsrv) != kinds.end();
  std::vector<double> standardized;
  for (const Day& day : days) {
    std::optional<double> jwtsrv_value;
    for (EstimatorKind k : kinds) {
      JumpReport jr;
      VarianceEstimate e;
      try {
        e = estimate(k, day.log_prices, settings, &jr);
      } catch (const Error& err) {
        throw Error(err.code(), o.input->string() + ": day " + day.id + ": " + display(k) + ": " + err.what());
      }
      write_estimate_row(est_out, day.id, e, settings.levels, slow_interval);
      if (k == EstimatorKind::jwtsrv) {
        write_jumps_csv(jump_out, day.id, jr, false);
        jwtsrv_value = e.value;
      }
    }
    if (has_jwtsrv && day.session_return && jwtsrv_value && *jwtsrv_value > 0.0) {
      const double z = *day.session_return / std::sqrt(*jwtsrv_value);
      standardized.push_back(z);
      std_out << day.id << ',' << *day.session_return << ',' << *jwtsrv_value << ',' << z << '\n';
    }
  }
  manifest.output(dir / "estimates.csv");
  manifest.output(dir / "jumps.csv");
  manifest.output(dir / "standardized_returns.csv");

  const Moments m = sample_moments(standardized);
  {
    auto out = open_out(dir / "standardized_moments.csv");
    out.precision(10);
    out << "count,mean,sd,skewness,kurtosis\n"
        << m.count << ',' << m.mean << ',' << m.sd << ',' << m.skewness << ',' << m.kurtosis << '\n';
  }
  manifest.output(dir / "standardized_moments.csv");
  manifest.write(dir);
}

void cmd_decompose(const Options& o) {
  if (!o.input) throw Error(ErrorCode::usage_error, "decompose needs --input estimates.csv");
  const Config c = load_config(o);
  Manifest manifest("decompose", o);
  json& resolved = manifest.resolved();
  const std::string which = c.get_string("decompose.estimator", "JWTSRV");
  const EstimatorKind kind = estimator_from_name(which);
  const std::vector<std::string> configured = c.get_strings("decompose.labels", {});
  c.reject_unknown("decompose");

  const std::vector<EstimateRow> rows = read_estimates(*o.input);
  std::vector<const EstimateRow*> picked;
  for (const auto& r : rows) {
    if (r.estimator == display(kind)) picked.push_back(&r);
  }
  if (picked.empty()) throw Error(ErrorCode::missing_per_scale, "no " + display(kind) + " rows in " + o.input->string());

  const fs::path dir = prepare_out(o);
  auto out = open_out(dir / "horizons.csv");
  out.precision(17);
  out << "day,estimator,horizon,variance,annualized_variance,annualized_vol,share\n";
  std::vector<std::string> labels;
  std::vector<svg::Series> series;
  std::vector<double> x;
  for (std::size_t i = 0; i < picked.size(); ++i) {
    const EstimateRow& r = *picked[i];
    VarianceEstimate e;
    e.estimator = kind;
    e.value = r.value;
    for (const auto& v : r.per_scale) {
      if (!v) {
        e.per_scale.clear();
        break;
      }
      e.per_scale.push_back(*v);
    }
    if (labels.empty()) {
      const int levels = static_cast<int>(e.per_scale.size()) - 1;
      labels = configured.empty() ? default_horizon_labels(r.interval, std::max(levels, 0)) : configured;
      resolved["estimator"] = display(kind);
      resolved["labels"] = labels;
    }
    std::vector<HorizonComponent> parts;
    try {
      parts = decompose_horizons(e, labels);
    } catch (const Error& err) {
      throw Error(err.code(), o.input->string() + ": day " + r.day + ": " + err.what());
    }
    if (series.empty()) {
      for (const auto& p : parts) series.push_back({p.label, {}, {}});
    }
    x.push_back(static_cast<double>(i));
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const double annual = parts[k].value * kTradingDaysPerYear;
      const double vol = std::copysign(std::sqrt(std::fabs(annual)), annual);
      const double share = e.value != 0.0 ? parts[k].value / e.value : 0.0;
      out << r.day << ',' << display(kind) << ',' << parts[k].label << ',' << parts[k].value << ',' << annual << ','
          << vol << ',' << share << '\n';
      if (k < series.size()) {
        series[k].x.push_back(static_cast<double>(i));
        series[k].y.push_back(annual);
      }
    }
  }
  manifest.output(dir / "horizons.csv");
  write_text(dir / "horizons.svg",
             svg::line_chart("Annualized variance by horizon (" + display(kind) + ")", "day index",
                             "annualized variance", series, true));
  manifest.output(dir / "horizons.svg");
  manifest.write(dir);
}

void cmd_study(const std::string& kind, const Options& o) {
  const Config c = load_config(o);
  Manifest manifest("study " + kind, o);
  json& resolved = manifest.resolved();
  const auto threads = static_cast<unsigned>(c.get_int("study.threads", 0));
  const fs::path dir = [&] {
    if (kind != "bias" && kind != "forecast") {
      throw Error(ErrorCode::usage_error, "study kind must be bias or forecast, got '" + kind + "'");
    }
    return o.out;
  }();

  if (kind == "bias") {
    BiasStudyConfig cfg;
    const double hurst = c.get_double("study.hurst", 0.5);
    const std::string model = c.get_string("study.model", "heston");
    cfg.model = model_from_name(model) == Model::heston_jd ? SimConfig::heston() : SimConfig::fractional(hurst);
    cfg.model = resolve_sim(c, "study", cfg.model, resolved["model"]);
    if (o.seed) cfg.model.seed = *o.seed;
    cfg.paths = o.paths.value_or(static_cast<std::size_t>(c.get_int("study.paths", 200)));
    cfg.noise_levels = c.get_doubles("study.noise_levels", cfg.noise_levels);
    cfg.jump_levels = c.get_doubles("study.jump_levels", cfg.jump_levels);
    cfg.threads = threads;
    cfg.estimators = resolve_estimators(o, c, table_estimators());
    cfg.settings = resolve_settings(o, c, kSimulatedDaySeconds / static_cast<double>(cfg.model.steps), 300.0,
                                    resolved["estimate"]);
    c.reject_unknown("study");
    c.reject_unknown("estimate");
    resolved["paths"] = cfg.paths;
    resolved["noise_levels"] = cfg.noise_levels;
    resolved["jump_levels"] = cfg.jump_levels;
    manifest.seed(cfg.model.seed);

    const BiasTable table = run_bias_study(cfg);
    prepare_out(o);
    {
      auto out = open_out(dir / "bias.csv");
      write_bias_csv(out, table);
    }
    {
      auto out = open_out(dir / "bias.txt");
      write_bias_text(out, table);
    }
    manifest.output(dir / "bias.csv");
    manifest.output(dir / "bias.txt");
    for (double level : cfg.jump_levels) {
      std::ostringstream name;
      name << "bias_jumps_" << level << ".svg";
      write_text(dir / name.str(), bias_svg(table, level));
      manifest.output(dir / name.str());
    }
  } else {
    ForecastStudyConfig cfg;
    cfg.model = resolve_sim(c, "study", ForecastStudyConfig::default_model(), resolved["model"]);
    if (o.seed) cfg.model.seed = *o.seed;
    cfg.paths = o.paths.value_or(static_cast<std::size_t>(c.get_int("study.paths", 500)));
    cfg.estimation_days = static_cast<std::size_t>(c.get_int("study.estimation_days", 100));
    cfg.threads = threads;
    cfg.estimators = resolve_estimators(o, c, table_estimators());
    cfg.settings = resolve_settings(o, c, kSimulatedDaySeconds / static_cast<double>(cfg.model.steps), 300.0,
                                    resolved["estimate"]);
    c.reject_unknown("study");
    c.reject_unknown("estimate");
    resolved["paths"] = cfg.paths;
    resolved["estimation_days"] = cfg.estimation_days;
    manifest.seed(cfg.model.seed);

    const ForecastReport report = run_forecast_study(cfg);
    prepare_out(o);
    {
      auto out = open_out(dir / "forecast.csv");
      write_forecast_csv(out, report);
    }
    {
      auto out = open_out(dir / "forecast.txt");
      write_forecast_text(out, report);
    }
    manifest.output(dir / "forecast.csv");
    manifest.output(dir / "forecast.txt");
    for (EstimatorKind k : cfg.estimators) {
      const std::string name = "forecast_" + display(k) + ".svg";
      write_text(dir / name, forecast_svg(report, k));
      manifest.output(dir / name);
    }
  }
  manifest.write(dir);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wavelet realized-volatility toolkit", "wavevol"};
  app.require_subcommand(1);
  app.set_version_flag("--version", WAVEVOL_VERSION);

  Options o;
  for (int i = 0; i < argc; ++i) o.argv.emplace_back(argv[i]);
  std::string config, out_dir = "out", input, study_kind;
  std::uint64_t seed = 0;
  std::size_t paths = 0;
  double interval = 0.0;
  int levels = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "TOML-like config file");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--paths", paths, "Monte-Carlo path count");
    sub->add_option("--estimators", o.estimators, "Comma-separated estimator tags")->delimiter(',');
    sub->add_option("--interval", interval, "Slow sampling interval in seconds");
    sub->add_option("--levels", levels, "MODWT levels");
    sub->add_option("--out", out_dir, "Output directory");
  };
  CLI::App* sim = app.add_subcommand("simulate", "Simulate intraday paths");
  CLI::App* est = app.add_subcommand("estimate", "Estimate daily integrated variance");
  CLI::App* dec = app.add_subcommand("decompose", "Split per-scale estimates into horizons");
  CLI::App* study = app.add_subcommand("study", "Monte-Carlo bias or forecast study");
  for (CLI::App* sub : {sim, est, dec, study}) common(sub);
  est->add_option("--input", input, "Tick CSV or simulate output directory")->required();
  dec->add_option("--input", input, "estimates.csv from estimate")->required();
  study->add_option("kind", study_kind, "bias or forecast")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  auto set_if = [&](CLI::App* sub) {
    if (sub->count("--config")) o.config = config;
    if (sub->count("--seed")) o.seed = seed;
    if (sub->count("--paths")) o.paths = paths;
    if (sub->count("--interval")) o.interval = interval;
    if (sub->count("--levels")) o.levels = levels;
    if (sub->get_option_no_throw("--input") && sub->count("--input")) o.input = input;
  };
  o.out = out_dir;

  try {
    if (*sim) {
      set_if(sim);
      cmd_simulate(o);
    } else if (*est) {
      set_if(est);
      cmd_estimate(o);
    } else if (*dec) {
      set_if(dec);
      cmd_decompose(o);
    } else if (*study) {
      set_if(study);
      cmd_study(study_kind, o);
    }
  } catch (const Error& e) {
    return report(e, err);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  out << "wrote " << o.out.string() << '\n';
  return kOk;
}

}  // namespace wavevol::cli
