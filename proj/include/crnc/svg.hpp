#pragma once

#include <string>
#include <vector>

namespace crnc {

struct PlotSpec {
  std::string title;
  std::string xlabel = "t";
  std::string ylabel;
  bool log_y = false;
  std::size_t max_lines = 50;
};

// one polyline per series over a shared x grid
std::string svg_lines(const std::vector<double>& x, const std::vector<std::vector<double>>& ys, const PlotSpec& spec);
void write_svg(const std::string& path, const std::string& svg);

}  // namespace crnc
