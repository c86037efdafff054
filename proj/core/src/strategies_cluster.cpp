#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "albench/kernels.hpp"
#include "strategies_impl.hpp"

namespace albench::detail {

namespace {

// Seeded k-means++ with Lloyd refinement; assignments break ties toward the
// lower cluster id so results are reproducible.
std::vector<int> kmeans(const Matrix& x, Index k, Rng& rng, Matrix* centroids_out) {
  const Index n = static_cast<Index>(x.rows());
  k = std::min(k, n);
  Matrix centroids(static_cast<Eigen::Index>(k), x.cols());

  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  Index first = rng.uniform_index(n);
  centroids.row(0) = x.row(static_cast<Eigen::Index>(first));
  for (Index c = 1; c < k; ++c) {
    double total = 0;
    for (Index i = 0; i < n; ++i) {
      double d = (x.row(static_cast<Eigen::Index>(i)) -
                  centroids.row(static_cast<Eigen::Index>(c - 1)))
                     .squaredNorm();
      mind[i] = std::min(mind[i], d);
      total += mind[i];
    }
    Index chosen = 0;
    if (total > 0) {
      double target = rng.uniform() * total;
      double acc = 0;
      for (Index i = 0; i < n; ++i) {
        acc += mind[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = rng.uniform_index(n);
    }
    centroids.row(static_cast<Eigen::Index>(c)) =
        x.row(static_cast<Eigen::Index>(chosen));
  }

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 50; ++iter) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (Index c = 0; c < k; ++c) {
        double d = (x.row(static_cast<Eigen::Index>(i)) -
                    centroids.row(static_cast<Eigen::Index>(c)))
                       .squaredNorm();
        if (d < bd) {
          bd = d;
          best = static_cast<int>(c);
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    Matrix sums = Matrix::Zero(static_cast<Eigen::Index>(k), x.cols());
    std::vector<Index> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(assign[i]) += x.row(static_cast<Eigen::Index>(i));
      counts[static_cast<Index>(assign[i])]++;
    }
    for (Index c = 0; c < k; ++c)
      if (counts[c] > 0)
        centroids.row(static_cast<Eigen::Index>(c)) =
            sums.row(static_cast<Eigen::Index>(c)) /
            static_cast<double>(counts[c]);
    if (!changed) break;
  }
  if (centroids_out) *centroids_out = centroids;
  return assign;
}

}  // namespace

// ---- hierarchical sampling --------------------------------------------------

void HierStrategy::begin_trial(const PoolView& pool, const IndexList& train_idx) {
  train_idx_ = train_idx;
  const Index p = train_idx.size();
  Matrix x = pool.gather(train_idx);

  // Average-linkage agglomeration via the nearest-neighbour chain, with
  // Lance-Williams distance updates over original slots.
  Matrix d(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j)))
              .norm();

  nodes_.clear();
  nodes_.resize(p);  // leaves first
  std::vector<int> slot_node(p);
  std::vector<Index> slot_size(p, 1);
  std::vector<char> active(p, 1);
  std::vector<Index> leaf_point(p);
  for (Index i = 0; i < p; ++i) {
    slot_node[i] = static_cast<int>(i);
    leaf_point[i] = train_idx[i];
  }

  auto nearest = [&](Index a, int prefer) {
    Index best = p;
    double bd = std::numeric_limits<double>::infinity();
    for (Index t = 0; t < p; ++t) {
      if (!active[t] || t == a) continue;
      double v = d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(t));
      bool better = v < bd;
      if (v == bd && best != p) {
        if (prefer >= 0 && t == static_cast<Index>(prefer)) better = true;
        else if (t < best && best != static_cast<Index>(prefer)) better = true;
      }
      if (better || best == p) {
        bd = v;
        best = t;
      }
    }
    return best;
  };

  std::vector<Index> chain;
  Index remaining = p;
  while (remaining > 1) {
    if (chain.empty()) {
      for (Index t = 0; t < p; ++t)
        if (active[t]) {
          chain.push_back(t);
          break;
        }
    }
    Index a = chain.back();
    int prefer = chain.size() >= 2 ? static_cast<int>(chain[chain.size() - 2]) : -1;
    Index b = nearest(a, prefer);
    if (chain.size() >= 2 && b == chain[chain.size() - 2]) {
      chain.pop_back();
      chain.pop_back();
      Index lo = std::min(a, b), hi = std::max(a, b);
      Node merged;
      merged.left = slot_node[lo];
      merged.right = slot_node[hi];
      nodes_.push_back(merged);
      int node_id = static_cast<int>(nodes_.size()) - 1;
      double na = static_cast<double>(slot_size[lo]);
      double nb = static_cast<double>(slot_size[hi]);
      for (Index t = 0; t < p; ++t) {
        if (!active[t] || t == lo || t == hi) continue;
        double v = (na * d(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(t)) +
                    nb * d(static_cast<Eigen::Index>(hi), static_cast<Eigen::Index>(t))) /
                   (na + nb);
        d(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(t)) = v;
        d(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(lo)) = v;
      }
      active[hi] = 0;
      slot_size[lo] += slot_size[hi];
      slot_node[lo] = node_id;
      --remaining;
    } else {
      chain.push_back(b);
    }
  }
  for (Index t = 0; t < p; ++t)
    if (active[t]) root_ = slot_node[t];

  // Leaf order via DFS so every node is a contiguous range.
  leaf_order_.clear();
  leaf_order_.reserve(p);
  std::vector<int> stack{root_};
  std::vector<int> visit_order;
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    visit_order.push_back(id);
    const Node& nd = nodes_[static_cast<Index>(id)];
    if (nd.left >= 0) {
      stack.push_back(nd.right);
      stack.push_back(nd.left);
    }
  }
  // Leaves get their slots in visit order; parents inherit child ranges.
  for (int id : visit_order) {
    Node& nd = nodes_[static_cast<Index>(id)];
    if (nd.left < 0) {
      nd.begin = leaf_order_.size();
      leaf_order_.push_back(leaf_point[static_cast<Index>(id)]);
      nd.end = leaf_order_.size();
    }
  }
  for (auto it = visit_order.rbegin(); it != visit_order.rend(); ++it) {
    Node& nd = nodes_[static_cast<Index>(*it)];
    if (nd.left >= 0) {
      nd.begin = nodes_[static_cast<Index>(nd.left)].begin;
      nd.end = nodes_[static_cast<Index>(nd.right)].end;
    }
  }

  pruning_.assign(1, root_);
}

void HierStrategy::split_impure(const std::function<bool(Index)>& is_labeled,
                                const std::function<int(Index)>& label_of) {
  std::vector<int> work = pruning_;
  pruning_.clear();
  while (!work.empty()) {
    int id = work.back();
    work.pop_back();
    const Node& nd = nodes_[static_cast<Index>(id)];
    std::set<int> seen;
    for (Index t = nd.begin; t < nd.end && seen.size() < 2; ++t)
      if (is_labeled(leaf_order_[t])) seen.insert(label_of(leaf_order_[t]));
    if (seen.size() >= 2 && nd.left >= 0) {
      work.push_back(nd.left);
      work.push_back(nd.right);
    } else {
      pruning_.push_back(id);
    }
  }
  std::sort(pruning_.begin(), pruning_.end());
}

std::vector<IndexList> HierStrategy::pruning_membership() const {
  std::vector<IndexList> out;
  for (int id : pruning_) {
    const Node& nd = nodes_[static_cast<Index>(id)];
    IndexList pts(leaf_order_.begin() + static_cast<long>(nd.begin),
                  leaf_order_.begin() + static_cast<long>(nd.end));
    std::sort(pts.begin(), pts.end());
    out.push_back(std::move(pts));
  }
  return out;
}

QuerySelection HierStrategy::select(const QueryContext& ctx) {
  ctx.validate();
  if (nodes_.empty()) begin_trial(*ctx.pool, merged_pool_indices(ctx));

  std::set<Index> labeled(ctx.labeled_idx.begin(), ctx.labeled_idx.end());
  auto is_labeled = [&](Index g) { return labeled.count(g) > 0; };
  auto label_of = [&](Index g) { return ctx.pool->label(g); };
  split_impure(is_labeled, label_of);

  std::set<Index> pending;  // picked this batch, label not known yet
  Rng rng = step_rng(ctx, "hier");
  QuerySelection sel;

  for (Index pick = 0; pick < ctx.batch_size; ++pick) {
    std::vector<double> weight(pruning_.size(), 0.0);
    std::vector<std::vector<Index>> unqueried(pruning_.size());
    for (Index ni = 0; ni < pruning_.size(); ++ni) {
      const Node& nd = nodes_[static_cast<Index>(pruning_[ni])];
      Index queried = 0;
      double maxclass = 0;
      std::map<int, Index> per_class;
      for (Index t = nd.begin; t < nd.end; ++t) {
        Index g = leaf_order_[t];
        if (is_labeled(g)) {
          ++queried;
          Index c = ++per_class[label_of(g)];
          maxclass = std::max(maxclass, static_cast<double>(c));
        } else if (!pending.count(g)) {
          unqueried[ni].push_back(g);
        }
      }
      double impurity =
          queried == 0 ? 1.0 : 1.0 - maxclass / static_cast<double>(queried);
      if (!unqueried[ni].empty())
        weight[ni] = static_cast<double>(nd.size()) * impurity;
    }

    double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    if (total <= 0) {
      // Every node is pure; fall back to unqueried mass so the budget can
      // still be spent.
      for (Index ni = 0; ni < pruning_.size(); ++ni)
        weight[ni] = static_cast<double>(unqueried[ni].size());
      total = std::accumulate(weight.begin(), weight.end(), 0.0);
    }
    if (total <= 0) throw StrategyError("hier: no unqueried points left");

    double target = rng.uniform() * total;
    double acc = 0;
    Index node_pick = pruning_.size();
    for (Index ni = 0; ni < pruning_.size(); ++ni) {
      acc += weight[ni];
      if (weight[ni] > 0 && acc >= target) {
        node_pick = ni;
        break;
      }
    }
    if (node_pick == pruning_.size() || unqueried[node_pick].empty()) {
      for (Index ni = 0; ni < pruning_.size(); ++ni)
        if (!unqueried[ni].empty()) {
          node_pick = ni;
          break;
        }
    }

    const auto& pool_pts = unqueried[node_pick];
    Index g = pool_pts[rng.uniform_index(pool_pts.size())];
    pending.insert(g);
    sel.chosen_idx.push_back(g);
  }
  return sel;
}

// ---- informative-diverse batches ---------------------------------------------

void InfoDivStrategy::begin_trial(const PoolView& pool, const IndexList& train_idx) {
  // Clustering happens lazily on the first select, where the batch size and
  // the strategy seed are known.
  (void)pool;
  train_idx_ = train_idx;
}

QuerySelection InfoDivStrategy::select(const QueryContext& ctx) {
  ctx.validate();
  if (!built_) {
    if (train_idx_.empty()) train_idx_ = merged_pool_indices(ctx);
    pos_.clear();
    for (Index i = 0; i < train_idx_.size(); ++i) pos_[train_idx_[i]] = i;
    Index k = std::max<Index>(ctx.batch_size, 10);
    Rng rng(derive_seed(ctx.strategy_seed, "infodiv-kmeans", 0, "strategy"));
    cluster_ = kmeans(ctx.pool->gather(train_idx_), k, rng, nullptr);
    Index kk = 0;
    for (int c : cluster_) kk = std::max<Index>(kk, static_cast<Index>(c) + 1);
    cluster_sizes_.assign(kk, 0);
    for (int c : cluster_) cluster_sizes_[static_cast<Index>(c)]++;
    built_ = true;
  }

  const IndexList& cand = ctx.unlabeled_idx;
  Matrix proba = proba_at(ctx, cand);
  std::vector<double> margin(cand.size());
  for (Index i = 0; i < cand.size(); ++i) {
    double first = -1, second = -1;
    for (Eigen::Index c = 0; c < proba.cols(); ++c) {
      double p = proba(static_cast<Eigen::Index>(i), c);
      if (p > first) {
        second = first;
        first = p;
      } else if (p > second) {
        second = p;
      }
    }
    margin[i] = first - second;
  }

  std::vector<Index> order(cand.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (margin[a] != margin[b]) return margin[a] < margin[b];
    return cand[a] < cand[b];
  });

  const double total = static_cast<double>(train_idx_.size());
  std::vector<Index> quota(cluster_sizes_.size());
  for (Index c = 0; c < quota.size(); ++c)
    quota[c] = static_cast<Index>(
        std::ceil(static_cast<double>(ctx.batch_size) *
                  static_cast<double>(cluster_sizes_[c]) / total));

  QuerySelection sel;
  std::vector<Index> used(quota.size(), 0);
  std::vector<char> taken(cand.size(), 0);
  for (Index oi : order) {
    if (sel.chosen_idx.size() == ctx.batch_size) break;
    Index cl = static_cast<Index>(cluster_[pos_.at(cand[oi])]);
    if (used[cl] >= quota[cl]) continue;
    used[cl]++;
    taken[oi] = 1;
    sel.chosen_idx.push_back(cand[oi]);
  }
  // Quota relaxation when the eligible pool ran out.
  for (Index oi : order) {
    if (sel.chosen_idx.size() == ctx.batch_size) break;
    if (!taken[oi]) {
      taken[oi] = 1;
      sel.chosen_idx.push_back(cand[oi]);
    }
  }
  sel.scores = std::move(margin);
  return sel;
}

// ---- margin cluster mean sampling ----------------------------------------------

QuerySelection McmStrategy::select(const QueryContext& ctx) {
  return select_mcm(ctx, TrainedModel{});
}

}  // namespace albench::detail

namespace albench {

QuerySelection select_mcm(const QueryContext& ctx, const TrainedModel& svm_model) {
  ctx.validate();
  const TrainedModel* model = &svm_model;
  TrainedModel own;
  bool have_svm = std::holds_alternative<SvmParams>(svm_model.params) &&
                  svm_model.classes >= 2;
  if (!have_svm) {
    if (ctx.evaluator &&
        std::holds_alternative<SvmParams>(ctx.evaluator->params)) {
      model = ctx.evaluator;
    } else {
      ClassifierSpec spec;
      spec.kind = ClassifierKind::SvmRbf;
      own = fit(spec, ctx.labeled_features(), ctx.labeled_labels());
      model = &own;
    }
  }

  const IndexList& cand = ctx.unlabeled_idx;
  Matrix xu = ctx.unlabeled_features();
  Matrix dec = decision_values(*model, xu);
  std::vector<double> dist(cand.size());
  for (Index i = 0; i < cand.size(); ++i)
    dist[i] = dec.row(static_cast<Eigen::Index>(i)).cwiseAbs().minCoeff();

  // Margin candidates, widened to the S nearest when the margin is empty-ish.
  std::vector<Index> inside;
  for (Index i = 0; i < cand.size(); ++i)
    if (dist[i] < 1.0) inside.push_back(i);
  if (inside.size() < ctx.batch_size) {
    std::vector<Index> order(cand.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (dist[a] != dist[b]) return dist[a] < dist[b];
      return cand[a] < cand[b];
    });
    inside.assign(order.begin(),
                  order.begin() + static_cast<long>(ctx.batch_size));
    std::sort(inside.begin(), inside.end());
  }

  Matrix xc(static_cast<Eigen::Index>(inside.size()), xu.cols());
  for (Index i = 0; i < inside.size(); ++i)
    xc.row(static_cast<Eigen::Index>(i)) =
        xu.row(static_cast<Eigen::Index>(inside[i]));

  Rng rng = detail::step_rng(ctx, "mcm-kmeans");
  Matrix centroids;
  detail::kmeans(xc, ctx.batch_size, rng, &centroids);

  QuerySelection sel;
  std::vector<char> used(inside.size(), 0);
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    Index best = inside.size();
    double bd = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < inside.size(); ++i) {
      if (used[i]) continue;
      double d = (xc.row(static_cast<Eigen::Index>(i)) - centroids.row(c))
                     .squaredNorm();
      if (d < bd || (d == bd && best != inside.size() &&
                     cand[inside[i]] < cand[inside[best]])) {
        bd = d;
        best = i;
      }
    }
    if (best == inside.size()) break;
    used[best] = 1;
    sel.chosen_idx.push_back(cand[inside[best]]);
  }
  // Refill if k-means produced fewer centroids than requested picks.
  for (Index i = 0; i < inside.size() && sel.chosen_idx.size() < ctx.batch_size;
       ++i) {
    if (!used[i]) {
      used[i] = 1;
      sel.chosen_idx.push_back(cand[inside[i]]);
    }
  }
  sel.scores = std::move(dist);
  return sel;
}

}  // namespace albench
