#include "albench/report.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace albench {

std::vector<std::pair<std::string, std::vector<std::pair<Index, double>>>>
mean_curves(const std::vector<CurveRow>& curves, const std::string& dataset,
            MetricKind metric) {
  std::map<std::string, std::map<Index, std::pair<double, Index>>> acc;
  for (const auto& row : curves) {
    if (row.dataset != dataset) continue;
    double v = metric == MetricKind::Acc   ? row.acc
               : metric == MetricKind::Auc ? row.auc
                                           : row.f1;
    auto& slot = acc[row.strategy][row.num_labeled];
    slot.first += v;
    slot.second += 1;
  }
  std::vector<std::pair<std::string, std::vector<std::pair<Index, double>>>> out;
  for (const auto& [strategy, by_budget] : acc) {
    std::vector<std::pair<Index, double>> pts;
    for (const auto& [x, sum_count] : by_budget)
      pts.emplace_back(x, sum_count.first / static_cast<double>(sum_count.second));
    out.emplace_back(strategy, std::move(pts));
  }
  return out;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                          "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
                          "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
                          "#f7b6d2", "#dbdb8d"};

}  // namespace

std::string render_curve_svg(const std::vector<CurveRow>& curves,
                             const std::string& dataset, MetricKind metric) {
  auto series = mean_curves(curves, dataset, metric);
  if (series.empty())
    throw AnalysisError("no curve rows for dataset " + dataset);

  const double width = 760, height = 500;
  const double ml = 60, mr = 170, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;

  Index x_min = std::numeric_limits<Index>::max(), x_max = 0;
  for (const auto& [name, pts] : series)
    for (const auto& [x, v] : pts) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
    }
  if (x_max <= x_min) x_max = x_min + 1;

  auto sx = [&](double x) {
    return ml + pw * (x - static_cast<double>(x_min)) /
                    static_cast<double>(x_max - x_min);
  };
  auto sy = [&](double v) { return mt + ph * (1.0 - v); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
     << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << ml << "\" y=\"24\" font-size=\"16\" "
        "font-family=\"sans-serif\">"
     << dataset << " / " << metric_name(metric) << " vs budget</text>\n";

  // Axes and ticks.
  os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
     << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    double v = t / 5.0;
    os << "<line x1=\"" << ml - 4 << "\" y1=\"" << sy(v) << "\" x2=\"" << ml
       << "\" y2=\"" << sy(v) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << sy(v) + 4
       << "\" font-size=\"11\" font-family=\"sans-serif\" "
          "text-anchor=\"end\">"
       << format_double(v) << "</text>\n";
    double xv = static_cast<double>(x_min) +
                v * static_cast<double>(x_max - x_min);
    os << "<line x1=\"" << sx(xv) << "\" y1=\"" << mt + ph << "\" x2=\""
       << sx(xv) << "\" y2=\"" << mt + ph + 4 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << sx(xv) << "\" y=\"" << mt + ph + 18
       << "\" font-size=\"11\" font-family=\"sans-serif\" "
          "text-anchor=\"middle\">"
       << static_cast<Index>(xv) << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
     << "\" font-size=\"12\" font-family=\"sans-serif\" "
        "text-anchor=\"middle\">labeled points</text>\n";

  Index color = 0;
  for (const auto& [name, pts] : series) {
    const char* stroke = kPalette[color % (sizeof(kPalette) / sizeof(char*))];
    os << "<polyline fill=\"none\" stroke=\"" << stroke
       << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, v] : pts)
      os << sx(static_cast<double>(x)) << ',' << sy(v) << ' ';
    os << "\"/>\n";
    double ly = mt + 16.0 * static_cast<double>(color);
    os << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\""
       << ml + pw + 30 << "\" y2=\"" << ly << "\" stroke=\"" << stroke
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << ml + pw + 36 << "\" y=\"" << ly + 4
       << "\" font-size=\"11\" font-family=\"sans-serif\">" << name
       << "</text>\n";
    ++color;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace albench
