#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "albench/classifiers.hpp"
#include "albench/datasets.hpp"
#include "albench/metrics.hpp"
#include "albench/strategies.hpp"

namespace albench {

enum class BudgetPolicy { FullPool, Fixed };

struct ExperimentConfig {
  std::vector<std::string> datasets;
  std::vector<StrategyId> strategies;
  int n_trials = 100;
  BudgetPolicy budget_policy = BudgetPolicy::FullPool;
  Index fixed_budget = 0;  // used when budget_policy == Fixed
  ClassifierSpec evaluator;
  std::uint64_t master_seed = 0;
  Index eval_every = 1;  // in batches
  double train_fraction = 0.6;
  Index n_initial = 20;
  std::string data_dir;
  std::string registry_path;
  int default_label_col = -1;  // per-file registry settings win

  // BSO settings live alongside so one file drives both commands.
  Index bso_width = 5;
  Index bso_budget = 0;           // 0 = full pool
  Index bso_candidate_cap = 0;    // 0 = evaluate every candidate

  void validate() const;
};

struct TrialResult {
  BudgetCurve acc_curve;
  BudgetCurve auc_curve;
  BudgetCurve f1_curve;
  IndexList selections;
  std::vector<double> timings;  // seconds per query step
  int metric_warnings = 0;      // degenerate AUC folds scored 0.5
};

struct AubcRecord {
  std::string dataset;
  std::string strategy;
  int trial = 0;
  double aubc_acc = 0, aubc_auc = 0, aubc_f1 = 0;
};

struct CurveRow {
  std::string dataset;
  std::string strategy;
  int trial = 0;
  Index num_labeled = 0;
  double acc = 0, auc = 0, f1 = 0;
};

struct SplitHashRow {
  std::string dataset;
  std::string strategy;
  int trial = 0;
  std::string hash;
};

struct FailureRow {
  std::string dataset;
  std::string strategy;
  int trial = 0;
  std::string error;
};

struct SummaryRow {
  std::string dataset;
  std::string strategy;
  int n_trials = 0;
  double mean_acc = 0, sd_acc = 0;
  double mean_auc = 0, sd_auc = 0;
  double mean_f1 = 0, sd_f1 = 0;
};

struct ExperimentResult {
  std::vector<AubcRecord> records;
  std::vector<CurveRow> curves;
  std::vector<SplitHashRow> split_hashes;
  std::vector<FailureRow> failures;
  int skipped_cells = 0;  // resumed from a checkpoint

  std::vector<SummaryRow> summarize() const;
  void sort_canonical();
};

struct RunOptions {
  std::string out_dir;  // empty disables checkpoint/result files
  int workers = 1;
  std::function<void(const std::string&)> log;
};

std::uint64_t split_seed(std::uint64_t master, const std::string& dataset,
                         int trial);
std::uint64_t strategy_seed(std::uint64_t master, const std::string& dataset,
                            int trial, const std::string& strategy);

TrialSplit trial_split(const Dataset& ds, const ExperimentConfig& cfg, int trial);

// One trial: seed labels, loop fit/evaluate/select/move until the budget is
// spent, final evaluation appended. Strategies only ever see train rows.
// `trial` feeds the strategy's seed stream.
TrialResult run_trial(const Dataset& ds, const StrategyId& strategy,
                      const TrialSplit& split, const ExperimentConfig& cfg,
                      int trial = 0);

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::vector<Dataset>& datasets,
                                const RunOptions& opts = {});

// Canonical CSV emission (also used by the bso command).
void write_result_files(const ExperimentResult& result, const std::string& dir);

// Checkpoint rows already on disk, keyed "dataset\x1fstrategy\x1ftrial".
struct CheckpointData {
  std::vector<AubcRecord> records;
  std::vector<CurveRow> curves;
  std::vector<SplitHashRow> split_hashes;
  std::vector<FailureRow> failures;
  std::set<std::string> completed;
};
CheckpointData load_checkpoint(const std::string& dir);
std::string cell_key(const std::string& dataset, const std::string& strategy,
                     int trial);

// Append-only, thread-safe cell sink; files live under `dir` and survive
// interruption so reruns can skip completed cells.
class CheckpointAppender {
 public:
  explicit CheckpointAppender(const std::string& dir);
  ~CheckpointAppender();
  void append(const AubcRecord& record, const std::vector<CurveRow>& curves,
              const SplitHashRow& split);
  void append_failure(const FailureRow& failure, const SplitHashRow* split);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace albench
