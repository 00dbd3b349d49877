#pragma once

#include <string>
#include <vector>

#include "gdiff/wasserstein.hpp"

namespace gdiff {

// Standalone SVG line plot of error curves: forward time on a linear x-axis,
// W2 on a log y-axis. Non-positive values cannot be drawn in log scale and
// break the polyline instead.
std::string curves_svg(const std::vector<ErrorCurve>& curves);

}  // namespace gdiff
