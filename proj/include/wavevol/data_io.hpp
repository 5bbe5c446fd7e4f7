// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <absl/time/civil_time.h>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wavevol/estimators.hpp"

namespace wavevol {

struct Tick {
  std::int64_t time_ms = 0;  // UTC epoch milliseconds
  double price = 0.0;
};

/// Ticks in strictly increasing time order, positive prices.
struct TickSeries {
  std::string instrument;
  std::vector<Tick> ticks;

  std::size_t size() const { return ticks.size(); }
};

enum class TimestampFormat { automatic, iso8601, epoch_ms };

struct TickFormat {
  TimestampFormat timestamp = TimestampFormat::automatic;
  /// Zone for ISO timestamps without an explicit offset.
  std::string zone = "UTC";
  std::string instrument;
};

/// CSV `timestamp,price` (header optional, extra columns ignored when a
/// header names them). Sorts, averages prices sharing a timestamp.
TickSeries parse_ticks(std::istream& in, const TickFormat& format, const std::string& source = "<ticks>");
TickSeries load_ticks(const std::filesystem::path& path, const TickFormat& format = {});
/// Epoch-millisecond CSV that load_ticks reads back unchanged.
void serialize_ticks(std::ostream& out, const TickSeries& series);

std::int64_t parse_timestamp_ms(const std::string& text, TimestampFormat format, const std::string& zone);

/// Session for trading date D runs from D-1 `open` to D `close` in the
/// exchange zone. Weekends, listed holidays, Dec 24-26 and Dec 31-Jan 2
/// are excluded.
struct SessionCalendar {
  std::string zone = "America/Chicago";
  int open_minute = 17 * 60;
  int close_minute = 16 * 60;
  std::set<absl::CivilDay> holidays;
  bool exclude_year_end = true;

  /// One YYYY-MM-DD per line, `#` comments.
  static std::set<absl::CivilDay> load_holidays(const std::filesystem::path& path);

  bool is_session(absl::CivilDay day) const;
  /// [start, end) in UTC epoch ms.
  std::pair<std::int64_t, std::int64_t> window(absl::CivilDay day) const;
  /// Session date owning a timestamp, or nullopt when it falls in the
  /// break or on an excluded date.
  std::optional<absl::CivilDay> session_of(std::int64_t time_ms) const;
};

std::string format_day(absl::CivilDay day);

/// Previous-tick log prices on a uniform grid over one session.
struct SessionGrid {
  std::string day;
  std::vector<double> log_prices;  // grid points start, start+Δ, ..., end
  double interval = 0.0;
  std::size_t n_ticks = 0;
  double open_price = 0.0;
  double close_price = 0.0;

  ReturnGrid returns() const;
};

struct GridOptions {
  double interval = 300.0;
  std::size_t min_ticks = 2;
};

struct DroppedSession {
  std::string day;
  std::string reason;
};

struct GridSet {
  std::vector<SessionGrid> sessions;
  std::vector<DroppedSession> dropped;
};

/// One session; no-ticks-in-session when the window holds no tick.
SessionGrid build_session_grid(const TickSeries& series, const SessionCalendar& calendar, absl::CivilDay day,
                               double interval);
/// Every session touched by the ticks; short sessions are dropped with
/// reason "below-min-ticks", excluded dates with "excluded-date".
GridSet build_grids(const TickSeries& series, const SessionCalendar& calendar, const GridOptions& options);

}  // namespace wavevol
