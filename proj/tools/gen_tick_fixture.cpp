// SPDX-License-Identifier: Apache-2.0
// Writes the synthetic GBP-like tick fixture used by the tests:
//   gen_tick_fixture <out.csv> [seed]
// Two sessions (2007-01-05, 2007-01-08) of Poisson ticks, one jump on the
// second, and Saturday ticks the session calendar must drop.
#include <absl/time/civil_time.h>
#include <absl/time/time.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>

namespace {

constexpr double kDailySd = 0.0119;
constexpr double kSessionSeconds = 23.0 * 3600.0;
constexpr double kMeanGap = 6.0;
constexpr double kTickSize = 1e-4;
constexpr double kJump = 0.005;

struct Writer {
  std::ofstream out;
  std::mt19937_64 rng;
  double log_price;

  void tick(absl::Time t) {
    const double price = std::round(std::exp(log_price) / kTickSize) * kTickSize;
    out << absl::FormatTime("%Y-%m-%dT%H:%M:%E3SZ", t, absl::UTCTimeZone()) << ',' << std::fixed
        << std::setprecision(4) << price << '\n';
  }

  void session(absl::Time open, double seconds, double jump_at) {
    std::exponential_distribution<double> gap(1.0 / kMeanGap);
    std::normal_distribution<double> normal;
    std::bernoulli_distribution duplicate(0.02);
    const double sd_per_second = kDailySd / std::sqrt(kSessionSeconds);
    double t = 0.0;
    bool jumped = jump_at < 0.0;
    while (true) {
      const double dt = gap(rng);
      if (t + dt >= seconds) break;
      t += dt;
      log_price += sd_per_second * std::sqrt(dt) * normal(rng);
      if (!jumped && t >= jump_at) {
        log_price += kJump;
        jumped = true;
      }
      const absl::Time at = open + absl::Milliseconds(static_cast<std::int64_t>(t * 1000.0));
      tick(at);
      if (duplicate(rng)) {
        log_price += sd_per_second * normal(rng);
        tick(at);
      }
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: gen_tick_fixture <out.csv> [seed]\n";
    return 1;
  }
  absl::TimeZone chicago;
  if (!absl::LoadTimeZone("America/Chicago", &chicago)) {
    std::cerr << "America/Chicago zone unavailable\n";
    return 3;
  }
  Writer w{std::ofstream(argv[1]), std::mt19937_64(argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2007),
           std::log(1.9600)};
  if (!w.out) {
    std::cerr << "cannot write " << argv[1] << '\n';
    return 2;
  }
  w.out << "timestamp,price\n";
  auto at = [&](int y, int m, int d, int hh) { return absl::FromCivil(absl::CivilSecond(y, m, d, hh, 0, 0), chicago); };

  w.session(at(2007, 1, 4, 17), kSessionSeconds, -1.0);
  w.session(at(2007, 1, 6, 9), 3.0 * 3600.0, -1.0);
  w.session(at(2007, 1, 7, 17), kSessionSeconds, 14.5 * 3600.0);
  return 0;
}
