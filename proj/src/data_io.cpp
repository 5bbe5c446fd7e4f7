// SPDX-License-Identifier: Apache-2.0
#include "wavevol/data_io.hpp"

#include <absl/time/time.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "wavevol/error.hpp"

namespace wavevol {
namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

absl::TimeZone load_zone(const std::string& name) {
  absl::TimeZone tz;
  if (!absl::LoadTimeZone(name, &tz)) throw Error(ErrorCode::config_error, "unknown time zone '" + name + "'");
  return tz;
}

bool is_integer(const std::string& s) {
  if (s.empty()) return false;
  const std::size_t start = s[0] == '-' ? 1 : 0;
  return start < s.size() && std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                                         [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::int64_t parse_timestamp_ms(const std::string& text, TimestampFormat format, const std::string& zone) {
  if (format == TimestampFormat::epoch_ms || (format == TimestampFormat::automatic && is_integer(text))) {
    std::int64_t ms = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), ms);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::parse_error, "bad epoch-ms timestamp '" + text + "'");
    }
    return ms;
  }
  std::string s = text;
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.replace(s.size() - 1, 1, "+00:00");
  static constexpr const char* kWithOffset[] = {"%Y-%m-%dT%H:%M:%E*S%Ez", "%Y-%m-%d %H:%M:%E*S%Ez"};
  static constexpr const char* kLocal[] = {"%Y-%m-%dT%H:%M:%E*S", "%Y-%m-%d %H:%M:%E*S"};
  absl::Time t;
  std::string err;
  for (const char* f : kWithOffset) {
    if (absl::ParseTime(f, s, &t, &err)) return absl::ToUnixMillis(t);
  }
  const absl::TimeZone tz = load_zone(zone);
  for (const char* f : kLocal) {
    if (absl::ParseTime(f, s, tz, &t, &err)) return absl::ToUnixMillis(t);
  }
  throw Error(ErrorCode::parse_error, "bad ISO-8601 timestamp '" + text + "'");
}

TickSeries parse_ticks(std::istream& in, const TickFormat& format, const std::string& source) {
  TickSeries series;
  series.instrument = format.instrument;
  std::string line;
  std::size_t row = 0;
  std::size_t time_col = 0;
  std::size_t price_col = 1;
  bool first = true;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const std::vector<std::string> fields = split(line);
    if (first) {
      first = false;
      const std::string head = lower(fields[0]);
      if (!head.empty() && !std::isdigit(static_cast<unsigned char>(head[0])) && head[0] != '-') {
        bool found_time = false;
        bool found_price = false;
        for (std::size_t c = 0; c < fields.size(); ++c) {
          const std::string name = lower(fields[c]);
          if (name == "timestamp" || name == "time" || name == "datetime") time_col = c, found_time = true;
          if (name == "price" || name == "last" || name == "close") price_col = c, found_price = true;
        }
        if (!found_time || !found_price) {
          throw Error(ErrorCode::parse_error, source + ": row 1: header needs timestamp and price columns");
        }
        continue;
      }
    }
    const auto where = [&](std::size_t col) {
      return source + ": row " + std::to_string(row) + ", column " + std::to_string(col + 1);
    };
    if (fields.size() <= std::max(time_col, price_col)) {
      throw Error(ErrorCode::parse_error, where(std::max(time_col, price_col)) + ": missing field");
    }
    Tick tick;
    try {
      tick.time_ms = parse_timestamp_ms(fields[time_col], format.timestamp, format.zone);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::parse_error) throw;
      throw Error(ErrorCode::parse_error, where(time_col) + ": " + e.what());
    }
    const std::string& p = fields[price_col];
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), tick.price);
    if (ec != std::errc() || ptr != p.data() + p.size() || !std::isfinite(tick.price)) {
      throw Error(ErrorCode::parse_error, where(price_col) + ": bad price '" + p + "'");
    }
    if (!(tick.price > 0.0)) {
      throw Error(ErrorCode::nonpositive_price, source + ": row " + std::to_string(row) + ": price " + p);
    }
    series.ticks.push_back(tick);
  }

  std::stable_sort(series.ticks.begin(), series.ticks.end(),
                   [](const Tick& a, const Tick& b) { return a.time_ms < b.time_ms; });
  std::vector<Tick> merged;
  merged.reserve(series.ticks.size());
  for (std::size_t i = 0; i < series.ticks.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < series.ticks.size() && series.ticks[j].time_ms == series.ticks[i].time_ms) sum += series.ticks[j++].price;
    merged.push_back({series.ticks[i].time_ms, sum / static_cast<double>(j - i)});
    i = j;
  }
  series.ticks = std::move(merged);
  return series;
}

TickSeries load_ticks(const std::filesystem::path& path, const TickFormat& format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open ticks " + path.string());
  TickFormat f = format;
  if (f.instrument.empty()) f.instrument = path.stem().string();
  return parse_ticks(in, f, path.string());
}

void serialize_ticks(std::ostream& out, const TickSeries& series) {
  const auto old_precision = out.precision(17);
  out << "timestamp,price\n";
  for (const Tick& t : series.ticks) out << t.time_ms << ',' << t.price << '\n';
  out.precision(old_precision);
}

std::set<absl::CivilDay> SessionCalendar::load_holidays(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config_not_found, "cannot open holiday file " + path.string());
  std::set<absl::CivilDay> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    absl::CivilDay day;
    if (!absl::ParseCivilTime(line, &day)) {
      throw Error(ErrorCode::config_error, path.string() + ": line " + std::to_string(row) + ": bad date '" + line + "'");
    }
    out.insert(day);
  }
  return out;
}

bool SessionCalendar::is_session(absl::CivilDay day) const {
  const absl::Weekday wd = absl::GetWeekday(day);
  if (wd == absl::Weekday::saturday || wd == absl::Weekday::sunday) return false;
  if (holidays.count(day)) return false;
  if (exclude_year_end) {
    const int m = day.month();
    const int d = day.day();
    if (m == 12 && (d == 24 || d == 25 || d == 26 || d == 31)) return false;
    if (m == 1 && (d == 1 || d == 2)) return false;
  }
  return true;
}

std::pair<std::int64_t, std::int64_t> SessionCalendar::window(absl::CivilDay day) const {
  const absl::TimeZone tz = load_zone(zone);
  const bool overnight = open_minute >= close_minute;
  const absl::CivilDay open_day = overnight ? day - 1 : day;
  const absl::CivilSecond open(open_day.year(), open_day.month(), open_day.day(), open_minute / 60,
                               open_minute % 60, 0);
  const absl::CivilSecond close(day.year(), day.month(), day.day(), close_minute / 60, close_minute % 60, 0);
  return {absl::ToUnixMillis(absl::FromCivil(open, tz)), absl::ToUnixMillis(absl::FromCivil(close, tz))};
}

std::optional<absl::CivilDay> SessionCalendar::session_of(std::int64_t time_ms) const {
  static thread_local std::string cached_name;
  static thread_local absl::TimeZone cached;
  if (cached_name != zone) {
    cached = load_zone(zone);
    cached_name = zone;
  }
  const absl::CivilSecond local = absl::ToCivilSecond(absl::FromUnixMillis(time_ms), cached);
  const int minute = local.hour() * 60 + local.minute();
  const absl::CivilDay date(local);
  std::optional<absl::CivilDay> day;
  if (open_minute >= close_minute) {
    if (minute >= open_minute) {
      day = date + 1;
    } else if (minute < close_minute) {
      day = date;
    }
  } else if (minute >= open_minute && minute < close_minute) {
    day = date;
  }
  return day;
}

std::string format_day(absl::CivilDay day) { return absl::FormatCivilTime(day); }

ReturnGrid SessionGrid::returns() const {
  ReturnGrid g;
  g.day = day;
  g.sampling_interval = interval;
  g.n_ticks_underlying = n_ticks;
  for (std::size_t i = 1; i < log_prices.size(); ++i) g.returns.push_back(log_prices[i] - log_prices[i - 1]);
  return g;
}

SessionGrid build_session_grid(const TickSeries& series, const SessionCalendar& calendar, absl::CivilDay day,
                               double interval) {
  if (!(interval > 0.0)) throw Error(ErrorCode::invalid_config, "sampling interval must be positive");
  const auto [start, end] = calendar.window(day);
  const auto step = static_cast<std::int64_t>(std::llround(interval * 1000.0));
  if (step <= 0 || (end - start) % step != 0) {
    throw Error(ErrorCode::invalid_config, "interval " + std::to_string(interval) + " s does not divide the " +
                                               format_day(day) + " session");
  }
  const auto& ticks = series.ticks;
  const auto lo = std::lower_bound(ticks.begin(), ticks.end(), start,
                                   [](const Tick& t, std::int64_t v) { return t.time_ms < v; });
  const auto hi = std::lower_bound(lo, ticks.end(), end, [](const Tick& t, std::int64_t v) { return t.time_ms < v; });
  if (lo == hi) throw Error(ErrorCode::no_ticks_in_session, format_day(day));

  SessionGrid grid;
  grid.day = format_day(day);
  grid.interval = interval;
  grid.n_ticks = static_cast<std::size_t>(hi - lo);
  grid.open_price = lo->price;
  grid.close_price = (hi - 1)->price;
  const std::int64_t points = (end - start) / step + 1;
  grid.log_prices.reserve(static_cast<std::size_t>(points));
  auto cursor = lo;
  for (std::int64_t k = 0; k < points; ++k) {
    const std::int64_t g = std::min(start + k * step, end - 1);
    while (cursor + 1 != hi && (cursor + 1)->time_ms <= g) ++cursor;
    grid.log_prices.push_back(std::log(cursor->price));
  }
  return grid;
}

GridSet build_grids(const TickSeries& series, const SessionCalendar& calendar, const GridOptions& options) {
  std::map<absl::CivilDay, std::size_t> counts;
  std::map<absl::CivilDay, std::size_t> excluded;
  const absl::TimeZone tz = load_zone(calendar.zone);
  for (const Tick& t : series.ticks) {
    const auto day = calendar.session_of(t.time_ms);
    if (!day) {
      const absl::CivilDay local(absl::ToCivilSecond(absl::FromUnixMillis(t.time_ms), tz));
      const absl::Weekday wd = absl::GetWeekday(local);
      if (wd == absl::Weekday::saturday || wd == absl::Weekday::sunday) ++excluded[local];
      continue;
    }
    if (calendar.is_session(*day)) {
      ++counts[*day];
    } else {
      ++excluded[*day];
    }
  }
  GridSet out;
  for (const auto& [day, n] : excluded) out.dropped.push_back({format_day(day), "excluded-date"});
  for (const auto& [day, n] : counts) {
    if (n < options.min_ticks) {
      out.dropped.push_back({format_day(day), "below-min-ticks"});
      continue;
    }
    out.sessions.push_back(build_session_grid(series, calendar, day, options.interval));
  }
  return out;
}

}  // namespace wavevol
