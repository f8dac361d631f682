#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wshrink::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // positive (x, y)
};

/// Log-log line chart: frame, tick labels, one polyline per series, legend.
std::string loglog_chart(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label);

}  // namespace wshrink::svg
