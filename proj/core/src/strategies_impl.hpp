#pragma once

#include <functional>
#include <map>

#include "albench/strategies.hpp"

namespace albench::detail {

// Shared helpers -------------------------------------------------------------

Matrix proba_at(const QueryContext& ctx, const IndexList& rows);
std::vector<double> entropy_rows(const Matrix& proba);
Rng step_rng(const QueryContext& ctx, const char* role);
IndexList merged_pool_indices(const QueryContext& ctx);  // sorted union

class UniformStrategy final : public QueryStrategy {
 public:
  QuerySelection select(const QueryContext& ctx) override;
};

class UsStrategy final : public QueryStrategy {
 public:
  explicit UsStrategy(UsVariant variant) : variant_(variant) {}
  QuerySelection select(const QueryContext& ctx) override;

 private:
  UsVariant variant_;
};

class QbcStrategy final : public QueryStrategy {
 public:
  explicit QbcStrategy(QbcVariant variant, bool use_gpc = false)
      : variant_(variant), use_gpc_(use_gpc) {}
  QuerySelection select(const QueryContext& ctx) override;

 private:
  QbcVariant variant_;
  bool use_gpc_;
};

class DwusStrategy final : public QueryStrategy {
 public:
  void begin_trial(const PoolView& pool, const IndexList& train_idx) override;
  QuerySelection select(const QueryContext& ctx) override;

 private:
  double sigma_ = 1.0;
};

class KCenterStrategy final : public QueryStrategy {
 public:
  QuerySelection select(const QueryContext& ctx) override;
};

class MarginMmdStrategy final : public QueryStrategy {
 public:
  void begin_trial(const PoolView& pool, const IndexList& train_idx) override;
  QuerySelection select(const QueryContext& ctx) override;

 private:
  Matrix gram_;
  std::map<Index, Index> gram_pos_;
};

class GraphStrategy final : public QueryStrategy {
 public:
  explicit GraphStrategy(Index knn = 10) : knn_(knn) {}
  void begin_trial(const PoolView& pool, const IndexList& train_idx) override;
  QuerySelection select(const QueryContext& ctx) override;

  double density_of(Index global_idx) const;

 private:
  Index knn_;
  IndexList train_idx_;
  std::map<Index, Index> pos_;                       // global -> local
  std::vector<std::vector<std::pair<Index, double>>> adj_;  // local -> (local, w)
  std::vector<double> density_;
};

class HierStrategy final : public QueryStrategy {
 public:
  void begin_trial(const PoolView& pool, const IndexList& train_idx) override;
  QuerySelection select(const QueryContext& ctx) override;

  // Pruning nodes as index sets over the pool; exposed for structural audits.
  std::vector<IndexList> pruning_membership() const;

 private:
  struct Node {
    int left = -1, right = -1;  // -1 for leaves
    Index begin = 0, end = 0;   // leaf-order range
    Index size() const { return end - begin; }
  };
  void split_impure(const std::function<bool(Index)>& is_labeled,
                    const std::function<int(Index)>& label_of);

  IndexList train_idx_;
  std::vector<Index> leaf_order_;  // global indices in dfs order
  std::vector<Node> nodes_;
  int root_ = -1;
  std::vector<int> pruning_;
};

class InfoDivStrategy final : public QueryStrategy {
 public:
  void begin_trial(const PoolView& pool, const IndexList& train_idx) override;
  QuerySelection select(const QueryContext& ctx) override;

 private:
  IndexList train_idx_;
  std::map<Index, Index> pos_;
  std::vector<int> cluster_;  // per train point
  std::vector<Index> cluster_sizes_;
  bool built_ = false;
};

class McmStrategy final : public QueryStrategy {
 public:
  QuerySelection select(const QueryContext& ctx) override;
};

class QuireStrategy final : public QueryStrategy {
 public:
  explicit QuireStrategy(double lambda = 1.0) : lambda_(lambda) {}
  void begin_trial(const PoolView& pool, const IndexList& train_idx) override;
  QuerySelection select(const QueryContext& ctx) override;

  // Closed-form evaluation for one candidate, exposed for the oracle tests.
  double score_candidate(const QueryContext& ctx, Index candidate);

 private:
  void sync_unlabeled(const IndexList& unlabeled);
  void rebuild_inverse();

  double lambda_;
  IndexList train_idx_;
  std::map<Index, Index> pos_;  // global -> row in l_
  Matrix l_;                    // (K + lambda I)^-1 over the train pool
  IndexList cur_unlabeled_;
  Matrix binv_;  // inverse of the current unlabeled block of l_
  int removals_since_rebuild_ = 0;
};

class VrStrategy final : public QueryStrategy {
 public:
  explicit VrStrategy(Index pool_subsample = 100)
      : pool_subsample_(pool_subsample) {}
  QuerySelection select(const QueryContext& ctx) override;

 private:
  Index pool_subsample_;
};

class HintSvmStrategy final : public QueryStrategy {
 public:
  HintSvmStrategy(double hint_fraction = 1.0, double c_hint = 0.1,
                  bool simplified = false)
      : hint_fraction_(hint_fraction), c_hint_(c_hint), simplified_(simplified) {}
  bool supports(const Dataset& ds) const override { return ds.k_classes == 2; }
  QuerySelection select(const QueryContext& ctx) override;

 private:
  double hint_fraction_;
  double c_hint_;
  bool simplified_;
};

class AlblStrategy final : public QueryStrategy {
 public:
  AlblStrategy();
  explicit AlblStrategy(std::vector<StrategyId> arms);
  bool supports(const Dataset& ds) const override { return ds.k_classes == 2; }
  void begin_trial(const PoolView& pool, const IndexList& train_idx) override;
  QuerySelection select(const QueryContext& ctx) override;

  std::vector<double> mixture() const;  // p_k, exposed for invariant tests
  double exploration_floor() const { return pmin_; }
  // Test hook: overrides the importance-weighted accuracy reward.
  std::function<double(Index chosen)> reward_override;

 private:
  struct Queried {
    Index idx;
    double q;
  };
  std::vector<StrategyId> arm_ids_;
  std::vector<std::unique_ptr<QueryStrategy>> arms_;
  std::vector<double> log_w_;
  std::vector<Queried> history_;
  double pmin_ = 0.05;
  bool initialized_ = false;
};

}  // namespace albench::detail
