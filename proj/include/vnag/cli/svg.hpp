#pragma once

#include <string>
#include <vector>

namespace vnag::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  /// Draw points instead of a polyline.
  bool markers = false;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Minimal standalone SVG line chart with axes, ticks and a legend.
/// Nonfinite points are skipped.
std::string line_chart(const std::vector<Series>& series, const ChartOptions& options);

}  // namespace vnag::cli
