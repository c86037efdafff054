#pragma once

#include <string>
#include <vector>

#include "albench/metrics.hpp"
#include "albench/protocol.hpp"

namespace albench {

// Mean metric-vs-budget curve per strategy for one dataset, one polyline per
// strategy, as a standalone SVG document.
std::string render_curve_svg(const std::vector<CurveRow>& curves,
                             const std::string& dataset, MetricKind metric);

// Per-strategy mean values at each budget, the numbers the SVG plots.
std::vector<std::pair<std::string, std::vector<std::pair<Index, double>>>>
mean_curves(const std::vector<CurveRow>& curves, const std::string& dataset,
            MetricKind metric);

}  // namespace albench
