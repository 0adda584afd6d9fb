#pragma once

// Minimal standalone SVG charts for method comparisons.

#include <optional>
#include <string>
#include <vector>

namespace actlogic::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

struct Bar {
  std::string name;
  /// nullopt renders as an empty bar marked "n/a".
  std::optional<double> value;
};

std::string bar_chart(const std::string& title, const std::string& y_label, const std::vector<Bar>& bars);

}  // namespace actlogic::cli
