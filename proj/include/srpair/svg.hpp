#pragma once

#include <string>
#include <vector>

namespace srpair::svg {

struct Curve {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "time (ns)";
  std::string y_label = "value";
  bool log_y = false;                 // decade ticks, positive data only
  std::vector<double> reference_lines;  // horizontal guides (e.g. 0.5 and 1 for g2)
  int width = 880;
  int height = 560;
};

// Renders a static line plot. Throws ValidationError when no curve has any
// finite point. Output is deterministic for identical inputs.
std::string render(const std::vector<Curve>& curves, const PlotOptions& options);

}  // namespace srpair::svg
