#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "albench/bso.hpp"
#include "albench/datasets.hpp"
#include "albench/metrics.hpp"
#include "albench/protocol.hpp"

namespace albench {

// Mean AUBC per (strategy, dataset) cell, one value per metric.
struct AubcTable {
  std::map<std::pair<std::string, std::string>, std::array<double, 3>> cells;
  std::set<std::string> strategies;
  std::set<std::string> datasets;

  static AubcTable from_records(const std::vector<AubcRecord>& records);
  bool has(const std::string& strategy, const std::string& dataset) const;
  double value(const std::string& strategy, const std::string& dataset,
               MetricKind metric) const;
};

struct WtlRecord {
  std::string strategy;
  MetricKind metric = MetricKind::Acc;
  int win = 0, tie = 0, loss = 0;

  int alpha() const { return 2 * win + tie; }
};

// Pairwise comparison per dataset: |a-b| <= threshold is a tie (absolute by
// default, relative to max(a, b) when `relative`). Pairs with a missing cell
// contribute no outcome to either side.
std::vector<WtlRecord> pairwise_wtl(const AubcTable& table, MetricKind metric,
                                    double tie_threshold = 0.005,
                                    bool relative = false);

struct AlphaRow {
  std::string strategy;
  std::array<WtlRecord, 3> per_metric;  // acc, auc, f1
  double avg_alpha = 0;
  double mean_win = 0;
};

// Sorted by average alpha = 2*win + tie over the three metrics, descending;
// ties by higher mean win, then name.
std::vector<AlphaRow> alpha_rank(const std::vector<WtlRecord>& records);

struct GroupRanking {
  std::string group;  // B, M, R, S, LD, HD, SC, LC
  std::vector<std::string> ranked;  // best first
};

std::vector<GroupRanking> group_rank(
    const AubcTable& table, const std::map<std::string, DatasetTags>& tags,
    double tie_threshold = 0.005, std::vector<std::string>* warnings = nullptr);

struct DifficultyRecord {
  std::string dataset;
  std::array<double, 3> bso{};
  std::array<double, 3> mean{};
  std::array<double, 3> max{};
  std::array<double, 3> sd{};
  double delta_a = 0;
  double delta_b = 0;
};

// Per-metric spread over strategies plus the BSO gaps, sorted by delta_b
// descending (ties by delta_a, then SD).
std::vector<DifficultyRecord> difficulty_table(const AubcTable& table,
                                               const std::vector<BsoMeans>& bso);

// delta_a = mean over metrics of (bso - mean); delta_b uses max instead.
std::pair<double, double> difficulty_from_summary(
    const std::array<double, 3>& bso, const std::array<double, 3>& mean,
    const std::array<double, 3>& max);

// Table renderers (CSV and aligned text).
std::string render_difficulty_csv(const std::vector<DifficultyRecord>& rows);
std::string render_difficulty_text(const std::vector<DifficultyRecord>& rows);
std::string render_ranking_csv(const std::vector<AlphaRow>& rows,
                               const std::vector<GroupRanking>& groups);
std::string render_ranking_text(const std::vector<AlphaRow>& rows,
                                const std::vector<GroupRanking>& groups);

}  // namespace albench
