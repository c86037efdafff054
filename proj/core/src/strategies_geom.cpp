#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "albench/kernels.hpp"
#include "strategies_impl.hpp"

namespace albench {

QuerySelection select_kcenter(const QueryContext& ctx) {
  ctx.validate();
  const IndexList& cand = ctx.unlabeled_idx;
  Matrix xu = ctx.unlabeled_features();
  Matrix xl = ctx.labeled_features();

  // Min distance from every candidate to the current center set.
  std::vector<double> mindist(cand.size(),
                              std::numeric_limits<double>::infinity());
  if (xl.rows() > 0) {
    Matrix d = pairwise_sq_dist(xu, xl);
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      mindist[static_cast<Index>(i)] = d.row(i).minCoeff();
  }

  QuerySelection sel;
  std::vector<char> taken(cand.size(), 0);
  std::vector<double> first_scores(mindist.begin(), mindist.end());
  for (Index pick = 0; pick < ctx.batch_size; ++pick) {
    Index best = cand.size();
    for (Index i = 0; i < cand.size(); ++i) {
      if (taken[i]) continue;
      if (best == cand.size() || mindist[i] > mindist[best] ||
          (mindist[i] == mindist[best] && cand[i] < cand[best]))
        best = i;
    }
    taken[best] = 1;
    sel.chosen_idx.push_back(cand[best]);
    for (Index i = 0; i < cand.size(); ++i) {
      if (taken[i]) continue;
      double d = (xu.row(static_cast<Eigen::Index>(i)) -
                  xu.row(static_cast<Eigen::Index>(best)))
                     .squaredNorm();
      mindist[i] = std::min(mindist[i], d);
    }
  }
  sel.scores = std::move(first_scores);
  return sel;
}

QuerySelection select_margin_mmd(const QueryContext& ctx, const Matrix& gram,
                                 const std::map<Index, Index>& gram_pos) {
  ctx.validate();
  const IndexList& cand = ctx.unlabeled_idx;

  auto pos = [&](Index global) {
    auto it = gram_pos.find(global);
    if (it == gram_pos.end())
      throw StrategyError("margin: index missing from the kernel cache");
    return static_cast<Eigen::Index>(it->second);
  };

  // Running kernel sums for A = labeled + chosen and B = remaining unlabeled.
  const Index p = gram_pos.size();
  std::vector<double> row_a(p, 0.0), row_b(p, 0.0);
  double s_aa = 0, s_bb = 0, s_ab = 0;
  Index na = ctx.labeled_idx.size(), nb = cand.size();

  std::vector<Eigen::Index> a_rows, b_rows;
  for (Index g : ctx.labeled_idx) a_rows.push_back(pos(g));
  for (Index g : cand) b_rows.push_back(pos(g));

  for (Index t = 0; t < p; ++t) {
    double sa = 0, sb = 0;
    for (Eigen::Index r : a_rows) sa += gram(static_cast<Eigen::Index>(t), r);
    for (Eigen::Index r : b_rows) sb += gram(static_cast<Eigen::Index>(t), r);
    row_a[t] = sa;
    row_b[t] = sb;
  }
  for (Eigen::Index r : a_rows) s_aa += row_a[static_cast<Index>(r)];
  for (Eigen::Index r : b_rows) s_bb += row_b[static_cast<Index>(r)];
  for (Eigen::Index r : a_rows) s_ab += row_b[static_cast<Index>(r)];

  auto mmd_after_move = [&](Index gi) {
    Eigen::Index r = pos(gi);
    double kxx = gram(r, r);
    double ra = row_a[static_cast<Index>(r)];
    double rb = row_b[static_cast<Index>(r)];
    double aa = s_aa + 2.0 * ra + kxx;
    double bb = s_bb - 2.0 * rb + kxx;
    double ab = s_ab + (rb - kxx) - ra;
    double na2 = static_cast<double>(na + 1);
    double nb2 = static_cast<double>(nb - 1);
    double v = aa / (na2 * na2);
    if (nb2 > 0) v += bb / (nb2 * nb2) - 2.0 * ab / (na2 * nb2);
    return v;
  };

  QuerySelection sel;
  std::vector<char> taken(cand.size(), 0);
  std::vector<double> first_scores;
  for (Index pick = 0; pick < ctx.batch_size; ++pick) {
    Index best = cand.size();
    double best_v = std::numeric_limits<double>::infinity();
    std::vector<double> scores;
    for (Index i = 0; i < cand.size(); ++i) {
      if (taken[i]) {
        if (pick == 0) scores.push_back(std::numeric_limits<double>::infinity());
        continue;
      }
      double v = mmd_after_move(cand[i]);
      if (pick == 0) scores.push_back(v);
      if (v < best_v || (v == best_v && (best == cand.size() || cand[i] < cand[best]))) {
        best_v = v;
        best = i;
      }
    }
    if (pick == 0) first_scores = std::move(scores);
    taken[best] = 1;
    sel.chosen_idx.push_back(cand[best]);

    // Commit the move of `best` from B to A.
    Eigen::Index r = pos(cand[best]);
    double kxx = gram(r, r);
    s_aa += 2.0 * row_a[static_cast<Index>(r)] + kxx;
    s_bb -= 2.0 * row_b[static_cast<Index>(r)] - kxx;
    s_ab += row_b[static_cast<Index>(r)] - kxx - row_a[static_cast<Index>(r)];
    for (Index t = 0; t < p; ++t) {
      double k = gram(static_cast<Eigen::Index>(t), r);
      row_a[t] += k;
      row_b[t] -= k;
    }
    ++na;
    --nb;
  }
  sel.scores = std::move(first_scores);
  return sel;
}

namespace detail {

// ---- k-center wrapper ----

QuerySelection KCenterStrategy::select(const QueryContext& ctx) {
  return select_kcenter(ctx);
}

// ---- greedy MMD wrapper ----

void MarginMmdStrategy::begin_trial(const PoolView& pool,
                                    const IndexList& train_idx) {
  Matrix x = pool.gather(train_idx);
  double sigma = median_pairwise_distance(x);
  double gamma = 1.0 / (2.0 * sigma * sigma);
  gram_ = rbf_kernel(x, x, gamma);
  gram_pos_.clear();
  for (Index i = 0; i < train_idx.size(); ++i) gram_pos_[train_idx[i]] = i;
}

QuerySelection MarginMmdStrategy::select(const QueryContext& ctx) {
  if (gram_pos_.empty()) begin_trial(*ctx.pool, merged_pool_indices(ctx));
  return select_margin_mmd(ctx, gram_, gram_pos_);
}

// ---- graph density wrapper ----

void GraphStrategy::begin_trial(const PoolView& pool, const IndexList& train_idx) {
  train_idx_ = train_idx;
  pos_.clear();
  for (Index i = 0; i < train_idx.size(); ++i) pos_[train_idx[i]] = i;

  Matrix x = pool.gather(train_idx);
  const Index p = train_idx.size();
  Matrix sq = pairwise_sq_dist(x, x);
  Index k = std::min<Index>(knn_, p - 1);

  // k nearest neighbours per node, then mean kNN distance sets the bandwidth.
  std::vector<std::vector<Index>> nn(p);
  double dist_sum = 0;
  Index dist_count = 0;
  for (Index i = 0; i < p; ++i) {
    std::vector<Index> order(p);
    std::iota(order.begin(), order.end(), Index{0});
    std::nth_element(order.begin(), order.begin() + static_cast<long>(k),
                     order.end(), [&](Index a, Index b) {
                       double da = a == i ? std::numeric_limits<double>::infinity()
                                          : sq(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(a));
                       double db = b == i ? std::numeric_limits<double>::infinity()
                                          : sq(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(b));
                       if (da != db) return da < db;
                       return a < b;
                     });
    for (Index j = 0; j < k; ++j) {
      Index nb = order[j];
      if (nb == i) continue;
      nn[i].push_back(nb);
      dist_sum += std::sqrt(sq(static_cast<Eigen::Index>(i),
                               static_cast<Eigen::Index>(nb)));
      ++dist_count;
    }
  }
  double sigma = dist_count ? dist_sum / static_cast<double>(dist_count) : 1.0;
  if (sigma <= 0) sigma = 1.0;
  double denom = 2.0 * sigma * sigma;

  // Symmetric union graph with Gaussian weights.
  std::vector<std::map<Index, double>> edges(p);
  for (Index i = 0; i < p; ++i) {
    for (Index nb : nn[i]) {
      double w = std::exp(-sq(static_cast<Eigen::Index>(i),
                              static_cast<Eigen::Index>(nb)) /
                          denom);
      edges[i][nb] = w;
      edges[nb][i] = w;
    }
  }
  adj_.assign(p, {});
  density_.assign(p, 0.0);
  for (Index i = 0; i < p; ++i) {
    double sum = 0;
    for (const auto& [nb, w] : edges[i]) {
      adj_[i].emplace_back(nb, w);
      sum += w;
    }
    density_[i] = edges[i].empty() ? 0.0
                                   : sum / static_cast<double>(edges[i].size());
  }
}

double GraphStrategy::density_of(Index global_idx) const {
  auto it = pos_.find(global_idx);
  if (it == pos_.end()) throw StrategyError("graph: unknown index");
  return density_[it->second];
}

QuerySelection GraphStrategy::select(const QueryContext& ctx) {
  ctx.validate();
  if (adj_.empty()) begin_trial(*ctx.pool, merged_pool_indices(ctx));

  const IndexList& cand = ctx.unlabeled_idx;
  Matrix proba = proba_at(ctx, cand);
  std::vector<double> uncertainty(cand.size());
  for (Index i = 0; i < cand.size(); ++i)
    uncertainty[i] = 1.0 - proba.row(static_cast<Eigen::Index>(i)).maxCoeff();

  double beta = ctx.budget > 0
                    ? std::clamp(static_cast<double>(ctx.step) /
                                     static_cast<double>(ctx.budget),
                                 0.0, 1.0)
                    : 1.0;

  auto ranks_of = [&](const std::vector<double>& score,
                      const std::vector<char>& taken) {
    // rank 0 = highest score; ties share the order of the lower pool index.
    std::vector<Index> order;
    for (Index i = 0; i < cand.size(); ++i)
      if (!taken[i]) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (score[a] != score[b]) return score[a] > score[b];
      return cand[a] < cand[b];
    });
    std::vector<double> rank(cand.size(), 0.0);
    for (Index r = 0; r < order.size(); ++r)
      rank[order[r]] = static_cast<double>(r);
    return rank;
  };

  QuerySelection sel;
  std::vector<char> taken(cand.size(), 0);
  for (Index pick = 0; pick < ctx.batch_size; ++pick) {
    std::vector<double> dens(cand.size(), 0.0);
    for (Index i = 0; i < cand.size(); ++i)
      if (!taken[i]) dens[i] = density_[pos_.at(cand[i])];
    auto rank_unc = ranks_of(uncertainty, taken);
    auto rank_den = ranks_of(dens, taken);

    Index best = cand.size();
    double best_v = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < cand.size(); ++i) {
      if (taken[i]) continue;
      double v = beta * rank_unc[i] + (1.0 - beta) * rank_den[i];
      if (v < best_v || (v == best_v && (best == cand.size() || cand[i] < cand[best]))) {
        best_v = v;
        best = i;
      }
    }
    taken[best] = 1;
    sel.chosen_idx.push_back(cand[best]);

    // Density decay around the pick promotes in-batch diversity.
    Index bl = pos_.at(cand[best]);
    for (const auto& [nb, w] : adj_[bl]) density_[nb] *= (1.0 - w);
  }
  return sel;
}

}  // namespace detail

}  // namespace albench
