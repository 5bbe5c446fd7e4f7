// SPDX-License-Identifier: Apache-2.0
#include "wavevol/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wavevol::svg {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* colour(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo <= 0.0) {
      const double pad = lo == 0.0 ? 1.0 : std::fabs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
  }
  double frac(double v) const { return (v - lo) / (hi - lo); }
};

class Canvas {
 public:
  Canvas(const std::string& title, Range x, Range y) : x_(x), y_(y) {
    os_.precision(6);
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os_ << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";
  }

  double px(double x) const { return kLeft + x_.frac(x) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - y_.frac(y) * (kHeight - kTop - kBottom); }

  void axes(const std::string& x_label, const std::string& y_label, bool x_ticks) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    os_ << "<g stroke=\"black\"><line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\"/><line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1 << "\"/></g>\n";
    for (int i = 0; i <= 4; ++i) {
      const double v = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      os_ << "<text x=\"" << x0 - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << v << "</text>\n";
      if (x_ticks) {
        const double u = x_.lo + (x_.hi - x_.lo) * i / 4.0;
        os_ << "<text x=\"" << px(u) << "\" y=\"" << y0 + 16 << "\" text-anchor=\"middle\">" << u << "</text>\n";
      }
    }
    os_ << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
        << escape(x_label) << "</text>\n";
    os_ << "<text transform=\"translate(16," << (y0 + y1) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(y_label) << "</text>\n";
  }

  void legend(std::size_t i, const std::string& name) {
    const double x = kWidth - kRight + 12;
    const double y = kTop + 18.0 * static_cast<double>(i);
    os_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\"" << colour(i)
        << "\"/><text x=\"" << x + 18 << "\" y=\"" << y + 11 << "\">" << escape(name) << "</text>\n";
  }

  std::ostringstream& raw() { return os_; }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  Range x_;
  Range y_;
  std::ostringstream os_;
};

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series, bool stacked) {
  Range xr, yr;
  std::vector<std::vector<double>> tops;
  std::vector<double> running;
  for (const Series& s : series) {
    running.resize(std::max(running.size(), s.y.size()), 0.0);
    std::vector<double> top(s.y.size());
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      top[i] = stacked ? running[i] + s.y[i] : s.y[i];
      if (stacked) running[i] = top[i];
      yr.add(top[i]);
    }
    for (double v : s.x) xr.add(v);
    tops.push_back(std::move(top));
  }
  if (stacked) yr.add(0.0);
  xr.finish();
  yr.finish();

  Canvas c(title, xr, yr);
  c.axes(x_label, y_label, true);
  for (std::size_t k = series.size(); k-- > 0;) {
    const Series& s = series[k];
    const std::size_t n = std::min(s.x.size(), tops[k].size());
    if (n == 0) continue;
    auto& os = c.raw();
    if (stacked) {
      os << "<polygon fill=\"" << colour(k) << "\" fill-opacity=\"0.8\" points=\"";
      for (std::size_t i = 0; i < n; ++i) os << c.px(s.x[i]) << ',' << c.py(tops[k][i]) << ' ';
      for (std::size_t i = n; i-- > 0;) {
        const double base = k == 0 ? 0.0 : tops[k - 1][i];
        os << c.px(s.x[i]) << ',' << c.py(base) << ' ';
      }
      os << "\"/>\n";
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << colour(k) << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < n; ++i) os << c.px(s.x[i]) << ',' << c.py(tops[k][i]) << ' ';
      os << "\"/>\n";
    }
  }
  for (std::size_t k = 0; k < series.size(); ++k) c.legend(k, series[k].name);
  return c.finish();
}

std::string bar_chart(const std::string& title, const std::vector<std::string>& categories,
                      const std::vector<Series>& series) {
  Range xr{0.0, static_cast<double>(std::max<std::size_t>(categories.size(), 1))};
  Range yr;
  yr.add(0.0);
  for (const Series& s : series) {
    for (double v : s.y) yr.add(v);
  }
  yr.finish();

  Canvas c(title, xr, yr);
  c.axes("", "", false);
  auto& os = c.raw();
  const double slot = c.px(1.0) - c.px(0.0);
  const double bar = slot * 0.8 / static_cast<double>(std::max<std::size_t>(series.size(), 1));
  for (std::size_t ci = 0; ci < categories.size(); ++ci) {
    const double left = c.px(static_cast<double>(ci)) + slot * 0.1;
    for (std::size_t k = 0; k < series.size(); ++k) {
      if (ci >= series[k].y.size() || !std::isfinite(series[k].y[ci])) continue;
      const double y0 = c.py(0.0);
      const double y1 = c.py(series[k].y[ci]);
      os << "<rect x=\"" << left + bar * static_cast<double>(k) << "\" y=\"" << std::min(y0, y1)
         << "\" width=\"" << bar << "\" height=\"" << std::fabs(y1 - y0) << "\" fill=\"" << colour(k) << "\"/>\n";
    }
    os << "<text x=\"" << left + slot * 0.4 << "\" y=\"" << kHeight - kBottom + 16
       << "\" text-anchor=\"middle\">" << escape(categories[ci]) << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) c.legend(k, series[k].name);
  return c.finish();
}

std::string scatter_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<double>& x, const std::vector<double>& y) {
  Range r;
  for (double v : x) r.add(v);
  for (double v : y) r.add(v);
  r.finish();
  Canvas c(title, r, r);
  c.axes(x_label, y_label, true);
  auto& os = c.raw();
  os << "<line x1=\"" << c.px(r.lo) << "\" y1=\"" << c.py(r.lo) << "\" x2=\"" << c.px(r.hi) << "\" y2=\""
     << c.py(r.hi) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    os << "<circle cx=\"" << c.px(x[i]) << "\" cy=\"" << c.py(y[i]) << "\" r=\"2.5\" fill=\"" << colour(0)
       << "\" fill-opacity=\"0.6\"/>\n";
  }
  return c.finish();
}

}  // namespace wavevol::svg
