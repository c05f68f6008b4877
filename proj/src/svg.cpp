#include "crnc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace crnc {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

}  // namespace

std::string svg_lines(const std::vector<double>& x, const std::vector<std::vector<double>>& ys, const PlotSpec& spec) {
  const double W = 720, H = 440, L = 70, R = 20, T = 40, Bm = 50;
  auto fy = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  double x0 = x.empty() ? 0 : x.front(), x1 = x.empty() ? 1 : x.back();
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  const std::size_t lines = std::min(ys.size(), spec.max_lines);
  for (std::size_t k = 0; k < lines; ++k)
    for (double v : ys[k]) {
      if (!std::isfinite(v) || (spec.log_y && v <= 0)) continue;
      y0 = std::min(y0, fy(v));
      y1 = std::max(y1, fy(v));
    }
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - Bm - (fy(v) - y0) / (y1 - y0) * (H - T - Bm); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title) << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - Bm << "\" x2=\"" << W - R << "\" y2=\"" << H - Bm << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - Bm << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    double yl = H - Bm - (H - T - Bm) * k / 4.0;
    o << "<text x=\"" << px(xv) << "\" y=\"" << H - Bm + 16 << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << yl + 4 << "\" text-anchor=\"end\">"
      << (spec.log_y ? "1e" + num(yv) : num(yv)) << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(spec.xlabel) << "</text>\n";
  o << "<text x=\"16\" y=\"" << (T + H - Bm) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (T + H - Bm) / 2
    << ")\">" << escape(spec.ylabel) << "</text>\n";
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  for (std::size_t k = 0; k < lines; ++k) {
    o << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << colors[k % 10] << "\" points=\"";
    const std::size_t m = std::min(x.size(), ys[k].size());
    for (std::size_t i = 0; i < m; ++i) {
      double v = ys[k][i];
      if (!std::isfinite(v) || (spec.log_y && v <= 0)) continue;
      o << num(px(x[i])) << ',' << num(py(v)) << ' ';
    }
    o << "\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const std::string& path, const std::string& svg) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << svg;
}

}  // namespace crnc
