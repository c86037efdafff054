#include "albench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace albench {

AubcTable AubcTable::from_records(const std::vector<AubcRecord>& records) {
  std::map<std::pair<std::string, std::string>, std::array<double, 4>> acc;
  for (const auto& r : records) {
    auto& cell = acc[{r.strategy, r.dataset}];
    cell[0] += r.aubc_acc;
    cell[1] += r.aubc_auc;
    cell[2] += r.aubc_f1;
    cell[3] += 1.0;
  }
  AubcTable table;
  for (const auto& [key, cell] : acc) {
    table.cells[key] = {cell[0] / cell[3], cell[1] / cell[3], cell[2] / cell[3]};
    table.strategies.insert(key.first);
    table.datasets.insert(key.second);
  }
  return table;
}

bool AubcTable::has(const std::string& strategy, const std::string& dataset) const {
  return cells.count({strategy, dataset}) > 0;
}

double AubcTable::value(const std::string& strategy, const std::string& dataset,
                        MetricKind metric) const {
  auto it = cells.find({strategy, dataset});
  if (it == cells.end())
    throw AnalysisError("missing table cell: " + strategy + " x " + dataset);
  return it->second[static_cast<Index>(metric)];
}

std::vector<WtlRecord> pairwise_wtl(const AubcTable& table, MetricKind metric,
                                    double tie_threshold, bool relative) {
  if (table.cells.empty()) throw AnalysisError("pairwise_wtl: empty table");
  std::vector<WtlRecord> out;
  for (const auto& a : table.strategies) {
    WtlRecord rec;
    rec.strategy = a;
    rec.metric = metric;
    for (const auto& b : table.strategies) {
      if (a == b) continue;
      for (const auto& ds : table.datasets) {
        if (!table.has(a, ds) || !table.has(b, ds)) continue;
        double va = table.value(a, ds, metric);
        double vb = table.value(b, ds, metric);
        double gap = std::abs(va - vb);
        double bound = relative
                           ? tie_threshold * std::max(std::abs(va), std::abs(vb))
                           : tie_threshold;
        if (gap <= bound)
          rec.tie++;
        else if (va > vb)
          rec.win++;
        else
          rec.loss++;
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AlphaRow> alpha_rank(const std::vector<WtlRecord>& records) {
  std::map<std::string, AlphaRow> rows;
  std::map<std::string, std::array<bool, 3>> seen;
  for (const auto& r : records) {
    AlphaRow& row = rows[r.strategy];
    row.strategy = r.strategy;
    row.per_metric[static_cast<Index>(r.metric)] = r;
    seen[r.strategy][static_cast<Index>(r.metric)] = true;
  }
  std::vector<AlphaRow> out;
  for (auto& [name, row] : rows) {
    const auto& present = seen[name];
    if (!present[0] || !present[1] || !present[2])
      throw AnalysisError("alpha_rank: strategy " + name +
                          " is missing a metric record");
    double alpha = 0, wins = 0;
    for (const auto& rec : row.per_metric) {
      alpha += rec.alpha();
      wins += rec.win;
    }
    row.avg_alpha = alpha / 3.0;
    row.mean_win = wins / 3.0;
    out.push_back(row);
  }
  std::sort(out.begin(), out.end(), [](const AlphaRow& a, const AlphaRow& b) {
    if (a.avg_alpha != b.avg_alpha) return a.avg_alpha > b.avg_alpha;
    if (a.mean_win != b.mean_win) return a.mean_win > b.mean_win;
    return a.strategy < b.strategy;
  });
  return out;
}

std::vector<GroupRanking> group_rank(const AubcTable& table,
                                     const std::map<std::string, DatasetTags>& tags,
                                     double tie_threshold,
                                     std::vector<std::string>* warnings) {
  for (const auto& ds : table.datasets)
    if (!tags.count(ds))
      throw AnalysisError("group_rank: dataset " + ds + " has no tags");

  struct Group {
    const char* name;
    std::function<bool(const DatasetTags&)> member;
  };
  const std::vector<Group> groups = {
      {"B", [](const DatasetTags& t) { return t.binary; }},
      {"M", [](const DatasetTags& t) { return !t.binary; }},
      {"R", [](const DatasetTags& t) { return t.real; }},
      {"S", [](const DatasetTags& t) { return !t.real; }},
      {"LD", [](const DatasetTags& t) { return t.low_dim; }},
      {"HD", [](const DatasetTags& t) { return !t.low_dim; }},
      {"SC", [](const DatasetTags& t) { return t.small_scale; }},
      {"LC", [](const DatasetTags& t) { return !t.small_scale; }},
  };

  std::vector<GroupRanking> out;
  for (const auto& group : groups) {
    AubcTable restricted;
    for (const auto& [key, cell] : table.cells) {
      if (!group.member(tags.at(key.second))) continue;
      restricted.cells[key] = cell;
      restricted.strategies.insert(key.first);
      restricted.datasets.insert(key.second);
    }
    if (restricted.cells.empty()) {
      if (warnings)
        warnings->push_back(std::string("group ") + group.name +
                            " has no datasets; omitted");
      continue;
    }
    std::vector<WtlRecord> records;
    for (MetricKind m : {MetricKind::Acc, MetricKind::Auc, MetricKind::F1}) {
      auto part = pairwise_wtl(restricted, m, tie_threshold);
      records.insert(records.end(), part.begin(), part.end());
    }
    GroupRanking ranking;
    ranking.group = group.name;
    for (const auto& row : alpha_rank(records))
      ranking.ranked.push_back(row.strategy);
    out.push_back(std::move(ranking));
  }
  return out;
}

std::pair<double, double> difficulty_from_summary(
    const std::array<double, 3>& bso, const std::array<double, 3>& mean,
    const std::array<double, 3>& max) {
  double da = 0, db = 0;
  for (Index m = 0; m < 3; ++m) {
    da += bso[m] - mean[m];
    db += bso[m] - max[m];
  }
  return {da / 3.0, db / 3.0};
}

std::vector<DifficultyRecord> difficulty_table(const AubcTable& table,
                                               const std::vector<BsoMeans>& bso) {
  std::map<std::string, const BsoMeans*> bso_by_name;
  for (const auto& b : bso) bso_by_name[b.dataset] = &b;

  std::vector<DifficultyRecord> out;
  for (const auto& ds : table.datasets) {
    auto it = bso_by_name.find(ds);
    if (it == bso_by_name.end())
      throw AnalysisError("difficulty_table: no BSO result for dataset " + ds);

    DifficultyRecord rec;
    rec.dataset = ds;
    rec.bso = {it->second->acc, it->second->auc, it->second->f1};
    for (Index m = 0; m < 3; ++m) {
      double sum = 0, mx = -1, count = 0;
      for (const auto& strat : table.strategies) {
        if (!table.has(strat, ds)) continue;
        double v = table.value(strat, ds, static_cast<MetricKind>(m));
        sum += v;
        mx = std::max(mx, v);
        count += 1;
      }
      if (count == 0)
        throw AnalysisError("difficulty_table: dataset " + ds + " has no cells");
      double mean = sum / count;
      double var = 0;
      for (const auto& strat : table.strategies) {
        if (!table.has(strat, ds)) continue;
        double d = table.value(strat, ds, static_cast<MetricKind>(m)) - mean;
        var += d * d;
      }
      rec.mean[m] = mean;
      rec.max[m] = mx;
      rec.sd[m] = std::sqrt(var / count);
    }
    auto [da, db] = difficulty_from_summary(rec.bso, rec.mean, rec.max);
    rec.delta_a = da;
    rec.delta_b = db;
    out.push_back(std::move(rec));
  }

  std::sort(out.begin(), out.end(),
            [](const DifficultyRecord& a, const DifficultyRecord& b) {
              if (a.delta_b != b.delta_b) return a.delta_b > b.delta_b;
              if (a.delta_a != b.delta_a) return a.delta_a > b.delta_a;
              double sda = (a.sd[0] + a.sd[1] + a.sd[2]) / 3.0;
              double sdb = (b.sd[0] + b.sd[1] + b.sd[2]) / 3.0;
              if (sda != sdb) return sda > sdb;
              return a.dataset < b.dataset;
            });
  return out;
}

// ---- rendering -----------------------------------------------------------------

namespace {

std::string fixed3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

}  // namespace

std::string render_difficulty_csv(const std::vector<DifficultyRecord>& rows) {
  std::ostringstream os;
  os << "dataset";
  for (const char* m : {"acc", "auc", "f1"})
    os << ",bso_" << m << ",mean_" << m << ",max_" << m << ",sd_" << m;
  os << ",delta_a,delta_b\n";
  for (const auto& r : rows) {
    os << r.dataset;
    for (Index m = 0; m < 3; ++m)
      os << ',' << format_double(r.bso[m]) << ',' << format_double(r.mean[m])
         << ',' << format_double(r.max[m]) << ',' << format_double(r.sd[m]);
    os << ',' << format_double(r.delta_a) << ',' << format_double(r.delta_b)
       << '\n';
  }
  return os.str();
}

std::string render_difficulty_text(const std::vector<DifficultyRecord>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "dataset";
  for (const char* m : {"acc", "auc", "f1"})
    os << std::right << std::setw(8) << (std::string("bso_") + m)
       << std::setw(8) << (std::string("mean_") + m) << std::setw(8)
       << (std::string("max_") + m) << std::setw(8) << (std::string("sd_") + m);
  os << std::setw(9) << "delta_a" << std::setw(9) << "delta_b" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(16) << r.dataset;
    for (Index m = 0; m < 3; ++m)
      os << std::right << std::setw(8) << fixed3(r.bso[m]) << std::setw(8)
         << fixed3(r.mean[m]) << std::setw(8) << fixed3(r.max[m]) << std::setw(8)
         << fixed3(r.sd[m]);
    os << std::setw(9) << fixed3(r.delta_a) << std::setw(9) << fixed3(r.delta_b)
       << '\n';
  }
  return os.str();
}

namespace {

std::string wtl_string(const WtlRecord& r) {
  return std::to_string(r.win) + "-" + std::to_string(r.tie) + "-" +
         std::to_string(r.loss);
}

std::map<std::string, std::map<std::string, Index>> group_positions(
    const std::vector<GroupRanking>& groups) {
  std::map<std::string, std::map<std::string, Index>> pos;
  for (const auto& g : groups)
    for (Index i = 0; i < g.ranked.size(); ++i) pos[g.group][g.ranked[i]] = i + 1;
  return pos;
}

}  // namespace

std::string render_ranking_csv(const std::vector<AlphaRow>& rows,
                               const std::vector<GroupRanking>& groups) {
  auto pos = group_positions(groups);
  std::ostringstream os;
  os << "strategy,wtl_acc,wtl_auc,wtl_f1,avg_alpha";
  for (const auto& g : groups) os << ",rank_" << g.group;
  os << '\n';
  for (const auto& r : rows) {
    os << r.strategy << ',' << wtl_string(r.per_metric[0]) << ','
       << wtl_string(r.per_metric[1]) << ',' << wtl_string(r.per_metric[2])
       << ',' << format_double(r.avg_alpha);
    for (const auto& g : groups) {
      auto it = pos[g.group].find(r.strategy);
      os << ',';
      if (it != pos[g.group].end()) os << it->second;
    }
    os << '\n';
  }
  return os.str();
}

std::string render_ranking_text(const std::vector<AlphaRow>& rows,
                                const std::vector<GroupRanking>& groups) {
  auto pos = group_positions(groups);
  std::ostringstream os;
  os << std::left << std::setw(16) << "strategy" << std::right << std::setw(14)
     << "wtl_acc" << std::setw(14) << "wtl_auc" << std::setw(14) << "wtl_f1"
     << std::setw(10) << "avg_a";
  for (const auto& g : groups) os << std::setw(5) << g.group;
  os << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(16) << r.strategy << std::right << std::setw(14)
       << wtl_string(r.per_metric[0]) << std::setw(14)
       << wtl_string(r.per_metric[1]) << std::setw(14)
       << wtl_string(r.per_metric[2]) << std::setw(10)
       << fixed3(r.avg_alpha);
    for (const auto& g : groups) {
      auto it = pos[g.group].find(r.strategy);
      os << std::setw(5)
         << (it != pos[g.group].end() ? std::to_string(it->second) : "-");
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace albench
