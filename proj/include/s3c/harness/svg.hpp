#pragma once

#include "s3c/common.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace s3c::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
inline constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 150, kTop = 40, kBottom = 55;

inline std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

inline std::string header(const std::string& title) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << esc(title)
     << "</text>\n";
  return os.str();
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

inline void pad_range(double& lo, double& hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    lo = 0;
    hi = 1;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
}

inline std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::ostringstream os;
  const double xl = kLeft, xr = kWidth - kRight, yt = kTop, yb = kHeight - kBottom;
  os << "<rect x=\"" << xl << "\" y=\"" << yt << "\" width=\"" << xr - xl << "\" height=\"" << yb - yt
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0, yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    os << "<text x=\"" << f.px(xv) << "\" y=\"" << yb + 16 << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    os << "<text x=\"" << xl - 6 << "\" y=\"" << f.py(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    os << "<line x1=\"" << xl << "\" x2=\"" << xr << "\" y1=\"" << f.py(yv) << "\" y2=\"" << f.py(yv)
       << "\" stroke=\"#ddd\"/>\n";
  }
  os << "<text x=\"" << (xl + xr) / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << esc(xlabel)
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << (yt + yb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << (yt + yb) / 2 << ")\">" << esc(ylabel) << "</text>\n";
  return os.str();
}

}  // namespace detail

/// Line chart with markers, one polyline per series, legend on the right.
inline std::string line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                             const std::vector<Series>& series) {
  using namespace detail;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  pad_range(x0, x1);
  pad_range(y0, y1);
  const Frame f{x0, x1, y0, y1};
  std::ostringstream os;
  os << header(title) << axes(f, xlabel, ylabel);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) os << f.px(s.x[i]) << ',' << f.py(s.y[i]) << ' ';
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
        os << "<circle cx=\"" << f.px(s.x[i]) << "\" cy=\"" << f.py(s.y[i]) << "\" r=\"2.5\" fill=\"" << color
           << "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << kWidth - kRight + 12 << "\" x2=\"" << kWidth - kRight + 32 << "\" y1=\"" << ly
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << kWidth - kRight + 36 << "\" y=\"" << ly + 4 << "\">" << esc(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Grayscale intensity image; values(r, c) drawn at row r, column c.
inline std::string heatmap(const std::string& title, const std::string& row_label, const std::string& col_label,
                           const std::vector<double>& row_ticks, const std::vector<double>& col_ticks,
                           const Matrix& values) {
  using namespace detail;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Index i = 0; i < values.size(); ++i)
    if (std::isfinite(values.data()[i])) {
      lo = std::min(lo, values.data()[i]);
      hi = std::max(hi, values.data()[i]);
    }
  pad_range(lo, hi);
  const double xl = kLeft, xr = kWidth - kRight, yt = kTop, yb = kHeight - kBottom;
  const double cw = (xr - xl) / std::max<Index>(values.cols(), 1), ch = (yb - yt) / std::max<Index>(values.rows(), 1);
  std::ostringstream os;
  os << header(title);
  for (Index r = 0; r < values.rows(); ++r)
    for (Index c = 0; c < values.cols(); ++c) {
      const double v = values(r, c);
      const int g = std::isfinite(v) ? static_cast<int>(std::lround(255.0 * (v - lo) / (hi - lo))) : 0;
      os << "<rect x=\"" << xl + cw * static_cast<double>(c) << "\" y=\"" << yt + ch * static_cast<double>(r)
         << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\"rgb(" << g << ',' << g << ',' << g
         << ")\"><title>" << fmt(v) << "</title></rect>\n";
    }
  for (std::size_t c = 0; c < col_ticks.size(); ++c)
    os << "<text x=\"" << xl + cw * (static_cast<double>(c) + 0.5) << "\" y=\"" << yb + 16
       << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(col_ticks[c]) << "</text>\n";
  for (std::size_t r = 0; r < row_ticks.size(); ++r)
    os << "<text x=\"" << xl - 6 << "\" y=\"" << yt + ch * (static_cast<double>(r) + 0.5) + 4
       << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(row_ticks[r]) << "</text>\n";
  os << "<text x=\"" << (xl + xr) / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << esc(col_label)
     << "</text>\n"
     << "<text x=\"18\" y=\"" << (yt + yb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << (yt + yb) / 2 << ")\">" << esc(row_label) << "</text>\n"
     << "<text x=\"" << xr + 10 << "\" y=\"" << yt + 12 << "\">max " << fmt(hi) << "</text>\n"
     << "<text x=\"" << xr + 10 << "\" y=\"" << yb << "\">min " << fmt(lo) << "</text>\n"
     << "</svg>\n";
  return os.str();
}

/// Equal-width histogram over [min, max] of the finite values.
inline std::string histogram(const std::string& title, const std::string& xlabel, const std::vector<double>& values,
                             int bins = 20) {
  using namespace detail;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values)
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  pad_range(lo, hi);
  bins = std::max(bins, 1);
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values)
    if (std::isfinite(v)) {
      int b = static_cast<int>((v - lo) / (hi - lo) * bins);
      ++counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))];
    }
  const int top = std::max(1, *std::max_element(counts.begin(), counts.end()));
  const Frame f{lo, hi, 0.0, static_cast<double>(top)};
  std::ostringstream os;
  os << header(title) << axes(f, xlabel, "count");
  const double bw = (hi - lo) / bins;
  for (int b = 0; b < bins; ++b) {
    const double xa = f.px(lo + bw * b), xb = f.px(lo + bw * (b + 1));
    const double y = f.py(counts[static_cast<std::size_t>(b)]);
    os << "<rect x=\"" << xa << "\" y=\"" << y << "\" width=\"" << std::max(xb - xa - 1.0, 0.5) << "\" height=\""
       << f.py(0) - y << "\" fill=\"" << kPalette[0] << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace s3c::svg
