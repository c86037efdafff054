#include "albench/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace albench {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (datasets.empty()) throw ConfigError("config: no datasets");
  if (strategies.empty()) throw ConfigError("config: no strategies");
  if (n_trials < 1) throw ConfigError("config: n_trials must be >= 1");
  if (eval_every < 1) throw ConfigError("config: eval_every must be >= 1");
  if (budget_policy == BudgetPolicy::Fixed && fixed_budget < 1)
    throw ConfigError("config: fixed budget must be >= 1");
  if (train_fraction <= 0 || train_fraction >= 1)
    throw ConfigError("config: train_fraction must be in (0, 1)");
  if (n_initial < 2) throw ConfigError("config: n_initial must be >= 2");
  for (const auto& s : strategies)
    if (s.batch_size < 1) throw ConfigError("config: batch size must be >= 1");
  evaluator.validate();
}

std::uint64_t split_seed(std::uint64_t master, const std::string& dataset,
                         int trial) {
  return derive_seed(master, dataset, static_cast<std::uint64_t>(trial), "split");
}

std::uint64_t strategy_seed(std::uint64_t master, const std::string& dataset,
                            int trial, const std::string& strategy) {
  return derive_seed(master, dataset + "/" + strategy,
                     static_cast<std::uint64_t>(trial), "strategy");
}

TrialSplit trial_split(const Dataset& ds, const ExperimentConfig& cfg, int trial) {
  SplitSpec spec;
  spec.trial_seed = split_seed(cfg.master_seed, ds.name, trial);
  spec.train_fraction = cfg.train_fraction;
  spec.n_initial = cfg.n_initial;
  return make_split(ds, spec);
}

namespace {

struct EvalPoint {
  double acc, auc, f1;
  int warnings;
};

EvalPoint evaluate_model(const TrainedModel& model, const Dataset& ds,
                         const IndexList& test_idx) {
  Matrix xt(static_cast<Eigen::Index>(test_idx.size()), ds.features.cols());
  Labels yt(test_idx.size());
  for (Index i = 0; i < test_idx.size(); ++i) {
    xt.row(static_cast<Eigen::Index>(i)) =
        ds.features.row(static_cast<Eigen::Index>(test_idx[i]));
    yt[i] = ds.labels[test_idx[i]];
  }
  Matrix proba = predict_proba(model, xt);
  if (proba.cols() < ds.k_classes) {
    Matrix full = Matrix::Zero(proba.rows(), ds.k_classes);
    full.leftCols(proba.cols()) = proba;
    proba = full;
  }
  Labels pred = argmax_rows(proba);

  EvalPoint p{};
  p.acc = accuracy(yt, pred);
  try {
    p.auc = auc(yt, proba);
  } catch (const MetricError&) {
    p.auc = 0.5;  // degenerate fold, neutral substitute
    p.warnings += 1;
  }
  p.f1 = f1(yt, pred, ds.k_classes);
  return p;
}

}  // namespace

TrialResult run_trial(const Dataset& ds, const StrategyId& strategy,
                      const TrialSplit& split, const ExperimentConfig& cfg,
                      int trial) {
  auto strat = make_strategy(strategy);
  if (!strat->supports(ds))
    throw StrategyError("strategy " + strategy.to_string() +
                        " does not support dataset " + ds.name);

  PoolView pool(ds, split.train_idx);
  strat->begin_trial(pool, split.train_idx);

  IndexList labeled = split.initial_labeled_idx;
  IndexList unlabeled;
  {
    std::set<Index> init(labeled.begin(), labeled.end());
    for (Index i : split.train_idx)
      if (!init.count(i)) unlabeled.push_back(i);
  }

  Index budget = unlabeled.size();
  if (cfg.budget_policy == BudgetPolicy::Fixed)
    budget = std::min(budget, cfg.fixed_budget);

  TrialResult result;
  result.acc_curve.kind = MetricKind::Acc;
  result.auc_curve.kind = MetricKind::Auc;
  result.f1_curve.kind = MetricKind::F1;

  std::set<Index> queried_guard;
  Index queries = 0;
  Index batches = 0;

  auto record_eval = [&](const TrainedModel& model) {
    EvalPoint p = evaluate_model(model, ds, split.test_idx);
    Index x = labeled.size();
    result.acc_curve.points.emplace_back(x, p.acc);
    result.auc_curve.points.emplace_back(x, p.auc);
    result.f1_curve.points.emplace_back(x, p.f1);
    result.metric_warnings += p.warnings;
  };

  pool.set_labeled(labeled);
  Matrix xl = pool.gather(labeled);
  Labels yl;
  for (Index i : labeled) yl.push_back(ds.labels[i]);
  TrainedModel model = fit(cfg.evaluator, xl, yl);
  record_eval(model);

  while (queries < budget) {
    auto clock_start = std::chrono::steady_clock::now();
    Index s_eff = std::min<Index>(strategy.batch_size, budget - queries);
    s_eff = std::min<Index>(s_eff, unlabeled.size());

    QueryContext ctx;
    ctx.pool = &pool;
    ctx.labeled_idx = labeled;
    ctx.unlabeled_idx = unlabeled;
    ctx.batch_size = s_eff;
    ctx.step = queries;
    ctx.budget = budget;
    ctx.strategy_seed =
        strategy_seed(cfg.master_seed, ds.name, trial, strategy.to_string());
    ctx.evaluator_spec = cfg.evaluator;
    ctx.evaluator = &model;

    QuerySelection sel = strat->select(ctx);
    if (sel.chosen_idx.size() != s_eff)
      throw StrategyError("strategy returned a batch of the wrong size");

    // Bookkeeping audit: chosen points must be fresh unlabeled train rows.
    for (Index g : sel.chosen_idx) {
      if (!std::binary_search(unlabeled.begin(), unlabeled.end(), g))
        throw StrategyError("strategy chose an index outside the unlabeled pool");
      if (!queried_guard.insert(g).second)
        throw StrategyError("strategy repeated a queried index");
    }

    for (Index g : sel.chosen_idx) {
      auto it = std::lower_bound(unlabeled.begin(), unlabeled.end(), g);
      unlabeled.erase(it);
      labeled.insert(std::lower_bound(labeled.begin(), labeled.end(), g), g);
      result.selections.push_back(g);
    }
    queries += s_eff;
    ++batches;

    pool.set_labeled(labeled);
    xl = pool.gather(labeled);
    yl.clear();
    for (Index i : labeled) yl.push_back(ds.labels[i]);
    model = fit(cfg.evaluator, xl, yl);
    if (batches % cfg.eval_every == 0 || queries >= budget) record_eval(model);

    result.timings.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      clock_start)
            .count());
  }

  return result;
}

// ---- experiment grid ---------------------------------------------------------

std::string cell_key(const std::string& dataset, const std::string& strategy,
                     int trial) {
  return dataset + "\x1f" + strategy + "\x1f" + std::to_string(trial);
}

namespace {

constexpr const char* kRecordsHeader =
    "dataset,strategy,trial,aubc_acc,aubc_auc,aubc_f1";
constexpr const char* kCurvesHeader =
    "dataset,strategy,trial,num_labeled,acc,auc,f1";
constexpr const char* kSplitsHeader = "dataset,strategy,trial,split_hash";
constexpr const char* kFailuresHeader = "dataset,strategy,trial,error";
constexpr const char* kSummaryHeader =
    "dataset,strategy,n_trials,mean_acc,sd_acc,mean_auc,sd_auc,mean_f1,sd_f1";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r' && c != '\n') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_double(const std::string& s) {
  return std::strtod(s.c_str(), nullptr);
}

}  // namespace

struct CheckpointAppender::Impl {
  std::string dir;
  std::mutex mu;
  std::ofstream records, curves, splits, failures;

  void open(std::ofstream& out, const std::string& path, const char* header) {
    bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
    out.open(path, std::ios::app);
    if (!out) throw Error("cannot open checkpoint file: " + path);
    if (fresh) out << header << '\n';
  }
};

CheckpointAppender::CheckpointAppender(const std::string& dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->dir = dir;
  if (dir.empty()) return;
  fs::create_directories(dir);
  impl_->open(impl_->records, dir + "/records.ckpt.csv", kRecordsHeader);
  impl_->open(impl_->curves, dir + "/curves.ckpt.csv", kCurvesHeader);
  impl_->open(impl_->splits, dir + "/splits.ckpt.csv", kSplitsHeader);
  impl_->open(impl_->failures, dir + "/failures.ckpt.csv", kFailuresHeader);
}

CheckpointAppender::~CheckpointAppender() = default;

void CheckpointAppender::append(const AubcRecord& r,
                                const std::vector<CurveRow>& curve_rows,
                                const SplitHashRow& split) {
  if (impl_->dir.empty()) return;
  std::lock_guard<std::mutex> lock(impl_->mu);
  impl_->records << r.dataset << ',' << r.strategy << ',' << r.trial << ','
                 << format_double(r.aubc_acc) << ',' << format_double(r.aubc_auc)
                 << ',' << format_double(r.aubc_f1) << '\n';
  impl_->records.flush();
  for (const auto& c : curve_rows) {
    impl_->curves << c.dataset << ',' << c.strategy << ',' << c.trial << ','
                  << c.num_labeled << ',' << format_double(c.acc) << ','
                  << format_double(c.auc) << ',' << format_double(c.f1) << '\n';
  }
  impl_->curves.flush();
  impl_->splits << split.dataset << ',' << split.strategy << ',' << split.trial
                << ',' << split.hash << '\n';
  impl_->splits.flush();
}

void CheckpointAppender::append_failure(const FailureRow& f,
                                        const SplitHashRow* split) {
  if (impl_->dir.empty()) return;
  std::lock_guard<std::mutex> lock(impl_->mu);
  std::string msg = f.error;
  std::replace(msg.begin(), msg.end(), ',', ';');
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  impl_->failures << f.dataset << ',' << f.strategy << ',' << f.trial << ','
                  << msg << '\n';
  impl_->failures.flush();
  if (split) {
    impl_->splits << split->dataset << ',' << split->strategy << ','
                  << split->trial << ',' << split->hash << '\n';
    impl_->splits.flush();
  }
}

CheckpointData load_checkpoint(const std::string& dir) {
  CheckpointData data;
  auto read = [&](const std::string& path,
                  const std::function<void(const std::vector<std::string>&)>& fn) {
    std::ifstream in(path);
    if (!in) return;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (first) {
        first = false;
        continue;
      }
      if (line.empty()) continue;
      fn(split_csv_line(line));
    }
  };

  read(dir + "/records.ckpt.csv", [&](const std::vector<std::string>& c) {
    if (c.size() != 6) return;
    AubcRecord r{c[0], c[1], std::stoi(c[2]), parse_double(c[3]),
                 parse_double(c[4]), parse_double(c[5])};
    data.completed.insert(cell_key(r.dataset, r.strategy, r.trial));
    data.records.push_back(std::move(r));
  });
  read(dir + "/curves.ckpt.csv", [&](const std::vector<std::string>& c) {
    if (c.size() != 7) return;
    data.curves.push_back(CurveRow{c[0], c[1], std::stoi(c[2]),
                                   static_cast<Index>(std::stoul(c[3])),
                                   parse_double(c[4]), parse_double(c[5]),
                                   parse_double(c[6])});
  });
  read(dir + "/splits.ckpt.csv", [&](const std::vector<std::string>& c) {
    if (c.size() != 4) return;
    data.split_hashes.push_back(SplitHashRow{c[0], c[1], std::stoi(c[2]), c[3]});
  });
  read(dir + "/failures.ckpt.csv", [&](const std::vector<std::string>& c) {
    if (c.size() != 4) return;
    FailureRow f{c[0], c[1], std::stoi(c[2]), c[3]};
    data.completed.insert(cell_key(f.dataset, f.strategy, f.trial));
    data.failures.push_back(std::move(f));
  });
  return data;
}

void ExperimentResult::sort_canonical() {
  auto key3 = [](const auto& r) {
    return std::make_tuple(r.dataset, r.strategy, r.trial);
  };
  std::sort(records.begin(), records.end(),
            [&](const auto& a, const auto& b) { return key3(a) < key3(b); });
  std::sort(curves.begin(), curves.end(), [&](const auto& a, const auto& b) {
    return std::make_tuple(a.dataset, a.strategy, a.trial, a.num_labeled) <
           std::make_tuple(b.dataset, b.strategy, b.trial, b.num_labeled);
  });
  std::sort(split_hashes.begin(), split_hashes.end(),
            [&](const auto& a, const auto& b) { return key3(a) < key3(b); });
  std::sort(failures.begin(), failures.end(),
            [&](const auto& a, const auto& b) { return key3(a) < key3(b); });
}

std::vector<SummaryRow> ExperimentResult::summarize() const {
  std::map<std::pair<std::string, std::string>, std::vector<const AubcRecord*>>
      cells;
  for (const auto& r : records) cells[{r.dataset, r.strategy}].push_back(&r);

  std::vector<SummaryRow> rows;
  for (const auto& [key, recs] : cells) {
    SummaryRow row;
    row.dataset = key.first;
    row.strategy = key.second;
    row.n_trials = static_cast<int>(recs.size());
    auto stats = [&](auto getter, double& mean, double& sd) {
      double m = 0;
      for (const auto* r : recs) m += getter(*r);
      m /= static_cast<double>(recs.size());
      double v = 0;
      for (const auto* r : recs) {
        double d = getter(*r) - m;
        v += d * d;
      }
      mean = m;
      sd = std::sqrt(v / static_cast<double>(recs.size()));
    };
    stats([](const AubcRecord& r) { return r.aubc_acc; }, row.mean_acc, row.sd_acc);
    stats([](const AubcRecord& r) { return r.aubc_auc; }, row.mean_auc, row.sd_auc);
    stats([](const AubcRecord& r) { return r.aubc_f1; }, row.mean_f1, row.sd_f1);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_result_files(const ExperimentResult& result, const std::string& dir) {
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const char* header,
                   const std::function<void(std::ofstream&)>& body) {
    std::string tmp = dir + "/" + name + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw Error("cannot write " + tmp);
      out << header << '\n';
      body(out);
    }
    fs::rename(tmp, dir + "/" + name);
  };

  write("results.csv", kRecordsHeader, [&](std::ofstream& out) {
    for (const auto& r : result.records)
      out << r.dataset << ',' << r.strategy << ',' << r.trial << ','
          << format_double(r.aubc_acc) << ',' << format_double(r.aubc_auc)
          << ',' << format_double(r.aubc_f1) << '\n';
  });
  write("curves.csv", kCurvesHeader, [&](std::ofstream& out) {
    for (const auto& c : result.curves)
      out << c.dataset << ',' << c.strategy << ',' << c.trial << ','
          << c.num_labeled << ',' << format_double(c.acc) << ','
          << format_double(c.auc) << ',' << format_double(c.f1) << '\n';
  });
  write("split_hashes.csv", kSplitsHeader, [&](std::ofstream& out) {
    for (const auto& s : result.split_hashes)
      out << s.dataset << ',' << s.strategy << ',' << s.trial << ',' << s.hash
          << '\n';
  });
  write("failures.csv", kFailuresHeader, [&](std::ofstream& out) {
    for (const auto& f : result.failures) {
      std::string msg = f.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out << f.dataset << ',' << f.strategy << ',' << f.trial << ',' << msg
          << '\n';
    }
  });
  write("summary.csv", kSummaryHeader, [&](std::ofstream& out) {
    for (const auto& s : result.summarize())
      out << s.dataset << ',' << s.strategy << ',' << s.n_trials << ','
          << format_double(s.mean_acc) << ',' << format_double(s.sd_acc) << ','
          << format_double(s.mean_auc) << ',' << format_double(s.sd_auc) << ','
          << format_double(s.mean_f1) << ',' << format_double(s.sd_f1) << '\n';
  });
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::vector<Dataset>& datasets,
                                const RunOptions& opts) {
  cfg.validate();
  for (const auto& ds : datasets) ds.validate();

  struct Cell {
    Index dataset;
    Index strategy;
    int trial;
  };
  std::vector<Cell> cells;
  for (Index d = 0; d < datasets.size(); ++d)
    for (Index s = 0; s < cfg.strategies.size(); ++s)
      for (int t = 0; t < cfg.n_trials; ++t) cells.push_back({d, s, t});

  CheckpointData prior;
  if (!opts.out_dir.empty()) prior = load_checkpoint(opts.out_dir);

  ExperimentResult result;
  result.records = prior.records;
  result.curves = prior.curves;
  result.split_hashes = prior.split_hashes;
  result.failures = prior.failures;

  CheckpointAppender writer(opts.out_dir);
  std::mutex result_mu;
  std::atomic<Index> next{0};
  std::atomic<int> skipped{0};

  auto worker = [&]() {
    for (;;) {
      Index i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      const Dataset& ds = datasets[cell.dataset];
      const StrategyId& strat = cfg.strategies[cell.strategy];
      const std::string strat_name = strat.to_string();

      if (prior.completed.count(cell_key(ds.name, strat_name, cell.trial))) {
        skipped.fetch_add(1);
        continue;
      }

      SplitHashRow split_row{ds.name, strat_name, cell.trial, ""};
      try {
        TrialSplit split = trial_split(ds, cfg, cell.trial);
        split_row.hash = to_hex(split.hash());
        TrialResult tr = run_trial(ds, strat, split, cfg, cell.trial);

        AubcRecord rec{ds.name, strat_name, cell.trial, aubc(tr.acc_curve),
                       aubc(tr.auc_curve), aubc(tr.f1_curve)};
        std::vector<CurveRow> curve_rows;
        for (Index p = 0; p < tr.acc_curve.points.size(); ++p)
          curve_rows.push_back(CurveRow{
              ds.name, strat_name, cell.trial, tr.acc_curve.points[p].first,
              tr.acc_curve.points[p].second, tr.auc_curve.points[p].second,
              tr.f1_curve.points[p].second});

        writer.append(rec, curve_rows, split_row);
        std::lock_guard<std::mutex> lock(result_mu);
        result.records.push_back(std::move(rec));
        result.curves.insert(result.curves.end(), curve_rows.begin(),
                             curve_rows.end());
        result.split_hashes.push_back(std::move(split_row));
      } catch (const std::exception& e) {
        FailureRow fail{ds.name, strat_name, cell.trial, e.what()};
        writer.append_failure(fail, split_row.hash.empty() ? nullptr : &split_row);
        std::lock_guard<std::mutex> lock(result_mu);
        if (!split_row.hash.empty())
          result.split_hashes.push_back(split_row);
        result.failures.push_back(std::move(fail));
        if (opts.log) opts.log("cell failed: " + fail.dataset + "/" +
                               fail.strategy + "/" + std::to_string(fail.trial) +
                               ": " + fail.error);
      }
    }
  };

  int workers = std::max(1, opts.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  result.skipped_cells = skipped.load();
  result.sort_canonical();
  if (!opts.out_dir.empty()) write_result_files(result, opts.out_dir);
  return result;
}

}  // namespace albench
