#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "albench/classifiers.hpp"
#include "albench/common.hpp"
#include "albench/datasets.hpp"

namespace albench {

enum class StrategyFamily {
  Uniform,
  UsLc,
  UsMargin,
  UsEntropy,
  QbcVe,
  QbcKl,
  Dwus,
  KCenter,
  Graph,
  MarginMmd,
  Hier,
  InfoDiv,
  Mcm,
  Quire,
  Albl,
  HintSvm,
  Vr,
};

struct StrategyId {
  StrategyFamily family = StrategyFamily::Uniform;
  Index batch_size = 1;

  std::string to_string() const;           // e.g. "kcenter-5"
  static StrategyId parse(const std::string& id);
};

// Feature access for strategies; test rows are off limits and touching one
// raises FirewallError. Labels are only readable for currently-labeled rows.
class PoolView {
 public:
  PoolView(const Dataset& ds, const IndexList& train_rows);

  const Dataset& dataset() const { return *ds_; }
  Eigen::RowVectorXd row(Index i) const;
  Matrix gather(const IndexList& rows) const;
  int label(Index i) const;
  void set_labeled(const IndexList& labeled);
  Index n() const { return ds_->n(); }
  Index d() const { return ds_->d(); }
  int k_classes() const { return ds_->k_classes; }

 private:
  const Dataset* ds_;
  std::vector<char> allowed_;
  std::vector<char> labeled_;
};

struct QueryContext {
  const PoolView* pool = nullptr;
  IndexList labeled_idx;    // sorted
  IndexList unlabeled_idx;  // sorted
  Index batch_size = 1;
  Index step = 0;    // queries made so far in this trial
  Index budget = 0;  // total queries in this trial
  std::uint64_t strategy_seed = 0;
  ClassifierSpec evaluator_spec;
  const TrainedModel* evaluator = nullptr;  // fitted on the current labeled set

  void validate() const;
  Matrix labeled_features() const { return pool->gather(labeled_idx); }
  Labels labeled_labels() const;
  Matrix unlabeled_features() const { return pool->gather(unlabeled_idx); }
};

struct QuerySelection {
  IndexList chosen_idx;
  std::optional<std::vector<double>> scores;  // per-candidate diagnostics
};

// Stateful per-trial strategy. Instances are confined to one trial.
class QueryStrategy {
 public:
  virtual ~QueryStrategy() = default;
  virtual QuerySelection select(const QueryContext& ctx) = 0;
  virtual bool supports(const Dataset& ds) const {
    (void)ds;
    return true;
  }
  // Called once before the first query of a trial.
  virtual void begin_trial(const PoolView& pool, const IndexList& train_idx) {
    (void)pool;
    (void)train_idx;
  }
};

std::unique_ptr<QueryStrategy> make_strategy(const StrategyId& id);

// ---- selection primitives (stateless unless noted) -------------------------

enum class UsVariant { Lc, Margin, Entropy };

QuerySelection select_uniform(const QueryContext& ctx);
QuerySelection select_us(const QueryContext& ctx, UsVariant variant,
                         const Matrix& proba);

enum class QbcVariant { Ve, Kl };
QuerySelection select_qbc(const QueryContext& ctx, QbcVariant variant,
                          const std::vector<Matrix>& committee_probas);

// score = entropy(x) * (mean similarity to the unlabeled pool)^beta,
// Gaussian similarity with the supplied bandwidth.
QuerySelection select_dwus(const QueryContext& ctx, const Matrix& proba,
                           double sigma, double beta = 1.0);

QuerySelection select_kcenter(const QueryContext& ctx);

// Greedy forward selection minimizing MMD between labeled-plus-chosen and the
// remaining unlabeled pool; `gram` covers the whole train pool.
QuerySelection select_margin_mmd(const QueryContext& ctx, const Matrix& gram,
                                 const std::map<Index, Index>& gram_pos);

QuerySelection select_mcm(const QueryContext& ctx, const TrainedModel& svm_model);

QuerySelection select_vr(const QueryContext& ctx, Index pool_subsample = 100);

// ---- internals reused by tests ---------------------------------------------

// Top-s candidate rows by descending score, ties to the lowest pool index.
IndexList top_indices_desc(const IndexList& candidates,
                           const std::vector<double>& scores, Index s);

double vote_entropy(const std::vector<int>& votes, int k_classes);
double mean_kl_to_consensus(const std::vector<Vector>& member_rows);

}  // namespace albench
