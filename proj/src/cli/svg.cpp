#include "actlogic/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace actlogic::cli {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 170;
constexpr double kTop = 40;
constexpr double kBottom = 60;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
                                    "#7f7f7f"};

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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void header(std::ostringstream& out, const std::string& title, const std::string& x_label,
            const std::string& y_label) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!x_label.empty())
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
        << escape(x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << kTop + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(y_label) << "</text>\n";
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (double v : s.x) x_lo = std::min(x_lo, v), x_hi = std::max(x_hi, v);
    for (double v : s.y) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1;
  if (!std::isfinite(y_lo)) y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_lo = y_hi - 0.01;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::ostringstream out;
  header(out, title, x_label, y_label);
  for (int t = 0; t <= 4; ++t) {
    const double y = y_lo + (y_hi - y_lo) * t / 4.0;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
    const double x = x_lo + (x_hi - x_lo) * t / 4.0;
    out << "<text x=\"" << px(x) << "\" y=\"" << kTop + plot_h + 16 << "\" text-anchor=\"middle\">" << num(x)
        << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = kPalette[s % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < std::min(series[s].x.size(), series[s].y.size()); ++i)
      out << fixed2(px(series[s].x[i])) << ',' << fixed2(py(series[s].y[i])) << ' ';
    out << "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(s);
    out << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kWidth - kRight + 32
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 38 << "\" y=\"" << ly << "\">" << escape(series[s].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string bar_chart(const std::string& title, const std::string& y_label, const std::vector<Bar>& bars) {
  double hi = 0.0;
  for (const auto& b : bars)
    if (b.value) hi = std::max(hi, *b.value);
  if (hi <= 0.0) hi = 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double slot = bars.empty() ? plot_w : plot_w / static_cast<double>(bars.size());

  std::ostringstream out;
  header(out, title, "", y_label);
  for (int t = 0; t <= 4; ++t) {
    const double y = hi * t / 4.0;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + (1.0 - t / 4.0) * plot_h + 4 << "\" text-anchor=\"end\">"
        << num(y) << "</text>\n";
  }
  for (std::size_t b = 0; b < bars.size(); ++b) {
    const double cx = kLeft + slot * (static_cast<double>(b) + 0.5);
    if (bars[b].value) {
      const double h = *bars[b].value / hi * plot_h;
      out << "<rect x=\"" << fixed2(cx - slot * 0.35) << "\" y=\"" << fixed2(kTop + plot_h - h) << "\" width=\""
          << fixed2(slot * 0.7) << "\" height=\"" << fixed2(h) << "\" fill=\"" << kPalette[b % std::size(kPalette)]
          << "\"/>\n";
      out << "<text x=\"" << fixed2(cx) << "\" y=\"" << fixed2(kTop + plot_h - h - 4) << "\" text-anchor=\"middle\">"
          << num(*bars[b].value) << "</text>\n";
    } else {
      out << "<text x=\"" << fixed2(cx) << "\" y=\"" << kTop + plot_h - 4 << "\" text-anchor=\"middle\">n/a</text>\n";
    }
    out << "<text x=\"" << fixed2(cx) << "\" y=\"" << kTop + plot_h + 16 << "\" text-anchor=\"middle\">"
        << escape(bars[b].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace actlogic::cli
