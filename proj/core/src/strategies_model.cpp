#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Cholesky>

#include "albench/kernels.hpp"
#include "albench/smo.hpp"
#include "strategies_impl.hpp"

namespace albench::detail {

// ---- QUIRE -------------------------------------------------------------------

void QuireStrategy::begin_trial(const PoolView& pool, const IndexList& train_idx) {
  train_idx_ = train_idx;
  pos_.clear();
  for (Index i = 0; i < train_idx.size(); ++i) pos_[train_idx[i]] = i;

  Matrix x = pool.gather(train_idx);
  double sigma = median_pairwise_distance(x);
  double gamma = 1.0 / (2.0 * sigma * sigma);
  Matrix k = rbf_kernel(x, x, gamma);

  const Eigen::Index p = k.rows();
  double lambda = lambda_;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Matrix reg = k;
    reg.diagonal().array() += lambda;
    Eigen::LLT<Matrix> llt(reg);
    if (llt.info() == Eigen::Success) {
      l_ = llt.solve(Matrix::Identity(p, p));
      lambda_ = lambda;
      cur_unlabeled_.clear();
      removals_since_rebuild_ = 0;
      return;
    }
    lambda *= 10.0;
  }
  throw StrategyError("quire: kernel matrix stayed singular after the lambda bump");
}

void QuireStrategy::rebuild_inverse() {
  const Eigen::Index nu = static_cast<Eigen::Index>(cur_unlabeled_.size());
  Matrix block(nu, nu);
  for (Eigen::Index i = 0; i < nu; ++i)
    for (Eigen::Index j = 0; j < nu; ++j)
      block(i, j) = l_(static_cast<Eigen::Index>(pos_.at(cur_unlabeled_[static_cast<Index>(i)])),
                       static_cast<Eigen::Index>(pos_.at(cur_unlabeled_[static_cast<Index>(j)])));
  Eigen::LLT<Matrix> llt(block);
  if (llt.info() != Eigen::Success)
    throw StrategyError("quire: unlabeled block not positive definite");
  binv_ = llt.solve(Matrix::Identity(nu, nu));
  removals_since_rebuild_ = 0;
}

void QuireStrategy::sync_unlabeled(const IndexList& unlabeled) {
  if (cur_unlabeled_ == unlabeled) return;
  std::set<Index> target(unlabeled.begin(), unlabeled.end());
  bool only_removals = true;
  std::set<Index> current(cur_unlabeled_.begin(), cur_unlabeled_.end());
  for (Index g : unlabeled)
    if (!current.count(g)) only_removals = false;

  if (cur_unlabeled_.empty() || !only_removals) {
    cur_unlabeled_ = unlabeled;
    rebuild_inverse();
    return;
  }

  // Remove rows one at a time with the block-inverse downdate, refreshing
  // periodically to keep rounding drift in check.
  while (cur_unlabeled_.size() > unlabeled.size()) {
    Index remove_pos = cur_unlabeled_.size();
    for (Index i = 0; i < cur_unlabeled_.size(); ++i)
      if (!target.count(cur_unlabeled_[i])) {
        remove_pos = i;
        break;
      }
    if (remove_pos == cur_unlabeled_.size()) break;
    const Eigen::Index r = static_cast<Eigen::Index>(remove_pos);
    const Eigen::Index nu = binv_.rows();
    Matrix corrected = binv_ - (binv_.col(r) * binv_.row(r)) / binv_(r, r);
    Matrix next(nu - 1, nu - 1);
    next.topLeftCorner(r, r) = corrected.topLeftCorner(r, r);
    next.topRightCorner(r, nu - 1 - r) = corrected.topRightCorner(r, nu - 1 - r);
    next.bottomLeftCorner(nu - 1 - r, r) = corrected.bottomLeftCorner(nu - 1 - r, r);
    next.bottomRightCorner(nu - 1 - r, nu - 1 - r) =
        corrected.bottomRightCorner(nu - 1 - r, nu - 1 - r);
    binv_ = std::move(next);
    cur_unlabeled_.erase(cur_unlabeled_.begin() + static_cast<long>(remove_pos));
    ++removals_since_rebuild_;
  }
  if (cur_unlabeled_ != unlabeled) {
    cur_unlabeled_ = unlabeled;
    rebuild_inverse();
  } else if (removals_since_rebuild_ >= 64) {
    rebuild_inverse();
  }
}

double QuireStrategy::score_candidate(const QueryContext& ctx, Index candidate) {
  if (l_.size() == 0) begin_trial(*ctx.pool, merged_pool_indices(ctx));
  sync_unlabeled(ctx.unlabeled_idx);

  const Index nu = cur_unlabeled_.size();
  const Index nl = ctx.labeled_idx.size();
  auto row_of = [&](Index g) { return static_cast<Eigen::Index>(pos_.at(g)); };

  Index r_local = nu;
  for (Index i = 0; i < nu; ++i)
    if (cur_unlabeled_[i] == candidate) r_local = i;
  if (r_local == nu) throw StrategyError("quire: candidate not in the unlabeled pool");
  const Eigen::Index r = static_cast<Eigen::Index>(r_local);

  Labels yl = ctx.labeled_labels();
  const int k = ctx.pool->k_classes();
  const int n_class = k == 2 ? 1 : k;

  Matrix lul(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(nl));
  for (Index i = 0; i < nu; ++i)
    for (Index j = 0; j < nl; ++j)
      lul(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          l_(row_of(cur_unlabeled_[i]), row_of(ctx.labeled_idx[j]));
  Matrix lll(static_cast<Eigen::Index>(nl), static_cast<Eigen::Index>(nl));
  for (Index i = 0; i < nl; ++i)
    for (Index j = 0; j < nl; ++j)
      lll(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          l_(row_of(ctx.labeled_idx[i]), row_of(ctx.labeled_idx[j]));

  const double a_ss = l_(row_of(candidate), row_of(candidate));
  const double d = binv_(r, r);

  double total = 0;
  for (int cls = 0; cls < n_class; ++cls) {
    int positive = k == 2 ? 1 : cls;
    Vector y(static_cast<Eigen::Index>(nl));
    for (Index j = 0; j < nl; ++j) y(static_cast<Eigen::Index>(j)) = yl[j] == positive ? 1.0 : -1.0;

    Vector g = lul * y;
    Vector h = binv_ * g;
    double q = g.dot(h);
    double ylly = y.dot(lll * y);

    double g_s = g(r), h_s = h(r);
    double t1 = 1.0 - a_ss * d;            // a~^T B_{:,s}
    double bg_s = h_s - g_s * d;           // B_{s,:} g~
    double a_b_a = -a_ss * t1 - t1 * t1 / d;
    double a_b_g = -a_ss * bg_s - t1 * bg_s / d;
    double g_b_g = q - 2.0 * g_s * h_s + g_s * g_s * d - bg_s * bg_s / d;

    double g_ss = a_ss - a_b_a;
    double g_sl_y = g_s - a_b_g;
    double y_gll_y = ylly - g_b_g;
    total += g_ss + y_gll_y + 2.0 * std::abs(g_sl_y);
  }
  return total / static_cast<double>(n_class);
}

QuerySelection QuireStrategy::select(const QueryContext& ctx) {
  ctx.validate();
  if (l_.size() == 0) begin_trial(*ctx.pool, merged_pool_indices(ctx));
  sync_unlabeled(ctx.unlabeled_idx);

  const Index nu = cur_unlabeled_.size();
  const Index nl = ctx.labeled_idx.size();
  auto row_of = [&](Index g) { return static_cast<Eigen::Index>(pos_.at(g)); };

  Labels yl = ctx.labeled_labels();
  const int k = ctx.pool->k_classes();
  const int n_class = k == 2 ? 1 : k;

  Matrix lul(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(nl));
  for (Index i = 0; i < nu; ++i)
    for (Index j = 0; j < nl; ++j)
      lul(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          l_(row_of(cur_unlabeled_[i]), row_of(ctx.labeled_idx[j]));
  Matrix lll(static_cast<Eigen::Index>(nl), static_cast<Eigen::Index>(nl));
  for (Index i = 0; i < nl; ++i)
    for (Index j = 0; j < nl; ++j)
      lll(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          l_(row_of(ctx.labeled_idx[i]), row_of(ctx.labeled_idx[j]));

  std::vector<double> scores(nu, 0.0);
  for (int cls = 0; cls < n_class; ++cls) {
    int positive = k == 2 ? 1 : cls;
    Vector y(static_cast<Eigen::Index>(nl));
    for (Index j = 0; j < nl; ++j)
      y(static_cast<Eigen::Index>(j)) = yl[j] == positive ? 1.0 : -1.0;
    Vector g = lul * y;
    Vector h = binv_ * g;
    double q = g.dot(h);
    double ylly = y.dot(lll * y);

    for (Index i = 0; i < nu; ++i) {
      const Eigen::Index r = static_cast<Eigen::Index>(i);
      double a_ss = l_(row_of(cur_unlabeled_[i]), row_of(cur_unlabeled_[i]));
      double d = binv_(r, r);
      double g_s = g(r), h_s = h(r);
      double t1 = 1.0 - a_ss * d;
      double bg_s = h_s - g_s * d;
      double a_b_a = -a_ss * t1 - t1 * t1 / d;
      double a_b_g = -a_ss * bg_s - t1 * bg_s / d;
      double g_b_g = q - 2.0 * g_s * h_s + g_s * g_s * d - bg_s * bg_s / d;
      scores[i] +=
          (a_ss - a_b_a) + (ylly - g_b_g) + 2.0 * std::abs(g_s - a_b_g);
    }
  }

  // Scores are aligned with cur_unlabeled_, which equals ctx.unlabeled_idx
  // after sync; pick the lowest evaluations.
  std::vector<double> neg(nu);
  for (Index i = 0; i < nu; ++i) neg[i] = -scores[i] / static_cast<double>(n_class);
  QuerySelection sel;
  sel.chosen_idx = top_indices_desc(cur_unlabeled_, neg, ctx.batch_size);
  sel.scores = std::move(scores);
  return sel;
}

// ---- variance reduction --------------------------------------------------------

namespace {

// Gradient of the class-kk probability w.r.t. the reduced logistic parameters,
// laid out as (k-1) blocks of x~.
Vector proba_gradient(const Eigen::RowVectorXd& xa, const Eigen::RowVectorXd& p,
                      int kk, int k) {
  const Eigen::Index da = xa.size();
  Vector out(static_cast<Eigen::Index>(k - 1) * da);
  for (int a = 0; a < k - 1; ++a) {
    double c = p(kk) * ((kk == a ? 1.0 : 0.0) - p(a));
    out.segment(a * da, da) = c * xa.transpose();
  }
  return out;
}

}  // namespace

QuerySelection VrStrategy::select(const QueryContext& ctx) {
  ctx.validate();
  Matrix xl = ctx.labeled_features();
  Labels yl = ctx.labeled_labels();
  ClassifierSpec spec;
  spec.kind = ClassifierKind::Logreg;
  spec.max_iter = 100;
  TrainedModel surrogate = fit(spec, xl, yl);
  const int k = surrogate.classes;
  const Eigen::Index da = xl.cols() + 1;
  const Eigen::Index m = static_cast<Eigen::Index>(k - 1) * da;

  auto augment_row = [&](const Eigen::RowVectorXd& row) {
    Eigen::RowVectorXd xa(row.size() + 1);
    xa.head(row.size()) = row;
    xa(row.size()) = 1.0;
    return xa;
  };

  // Fisher information accumulated over the labeled set, ridged for safety.
  Matrix pl = predict_proba(surrogate, xl);
  Matrix fisher = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < xl.rows(); ++i) {
    Eigen::RowVectorXd xa = augment_row(xl.row(i));
    Matrix xxt = xa.transpose() * xa;
    for (int a = 0; a < k - 1; ++a) {
      for (int b = 0; b < k - 1; ++b) {
        double w = pl(i, a) * ((a == b ? 1.0 : 0.0) - pl(i, b));
        if (w != 0.0) fisher.block(a * da, b * da, da, da) += w * xxt;
      }
    }
  }
  fisher.diagonal().array() += 1e-6;
  Eigen::LDLT<Matrix> ldlt(fisher);
  Matrix finv = ldlt.solve(Matrix::Identity(m, m));

  // Seeded subsample of the unlabeled pool carries the variance average.
  Rng rng = step_rng(ctx, "vr-subsample");
  IndexList sub = ctx.unlabeled_idx;
  if (sub.size() > pool_subsample_)
    sub = rng.sample_without_replacement(sub, pool_subsample_);
  std::sort(sub.begin(), sub.end());

  Matrix xs = ctx.pool->gather(sub);
  Matrix ps = predict_proba(surrogate, xs);
  std::vector<std::vector<Vector>> phi(sub.size());
  std::vector<double> base(sub.size(), 0.0);
  std::vector<std::vector<Vector>> finv_phi(sub.size());
  for (Index u = 0; u < sub.size(); ++u) {
    Eigen::RowVectorXd xa = augment_row(xs.row(static_cast<Eigen::Index>(u)));
    for (int kk = 0; kk < k; ++kk) {
      Vector f = proba_gradient(xa, ps.row(static_cast<Eigen::Index>(u)), kk, k);
      Vector w = finv * f;
      base[u] += f.dot(w);
      phi[u].push_back(std::move(f));
      finv_phi[u].push_back(std::move(w));
    }
  }

  const IndexList& cand = ctx.unlabeled_idx;
  Matrix xu = ctx.unlabeled_features();
  Matrix pu = predict_proba(surrogate, xu);

  std::vector<double> scores(cand.size(), 0.0);
  for (Index ci = 0; ci < cand.size(); ++ci) {
    Eigen::RowVectorXd xa = augment_row(xu.row(static_cast<Eigen::Index>(ci)));
    // Candidate information as rank-one terms via the (k-1)x(k-1) eigenbasis.
    Matrix wmat(k - 1, k - 1);
    for (int a = 0; a < k - 1; ++a)
      for (int b = 0; b < k - 1; ++b)
        wmat(a, b) = pu(static_cast<Eigen::Index>(ci), a) *
                     ((a == b ? 1.0 : 0.0) - pu(static_cast<Eigen::Index>(ci), b));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(wmat);

    std::vector<Vector> zs;
    std::vector<double> denoms, lambdas;
    for (int j = 0; j < k - 1; ++j) {
      double lam = eig.eigenvalues()(j);
      if (lam <= 1e-14) continue;
      Vector psi(m);
      for (int a = 0; a < k - 1; ++a)
        psi.segment(a * da, da) = eig.eigenvectors()(a, j) * xa.transpose();
      // z = M_{j-1} psi with the corrections applied sequentially.
      Vector z = finv * psi;
      for (Index t = 0; t < zs.size(); ++t)
        z -= lambdas[t] * (zs[t].dot(psi) / denoms[t]) * zs[t];
      double denom = 1.0 + lam * psi.dot(z);
      zs.push_back(std::move(z));
      denoms.push_back(denom);
      lambdas.push_back(lam);
    }

    double total = 0;
    for (Index u = 0; u < sub.size(); ++u) {
      double v = base[u];
      for (Index t = 0; t < zs.size(); ++t) {
        for (int kk = 0; kk < k; ++kk) {
          double dot = phi[u][static_cast<Index>(kk)].dot(zs[t]);
          v -= lambdas[t] * dot * dot / denoms[t];
        }
      }
      total += v;
    }
    scores[ci] = total / static_cast<double>(sub.size());
  }

  std::vector<double> neg(scores.size());
  for (Index i = 0; i < scores.size(); ++i) neg[i] = -scores[i];
  QuerySelection sel;
  sel.chosen_idx = top_indices_desc(cand, neg, ctx.batch_size);
  sel.scores = std::move(scores);
  return sel;
}

// ---- hinted SVM ------------------------------------------------------------------

QuerySelection HintSvmStrategy::select(const QueryContext& ctx) {
  ctx.validate();
  if (ctx.pool->k_classes() != 2)
    throw StrategyError("hintsvm supports binary tasks only");

  Matrix xl = ctx.labeled_features();
  Labels yl = ctx.labeled_labels();

  IndexList hints;
  if (!simplified_ && c_hint_ > 0 && hint_fraction_ > 0) {
    Index want = static_cast<Index>(
        std::ceil(hint_fraction_ * static_cast<double>(ctx.unlabeled_idx.size())));
    want = std::min(want, ctx.unlabeled_idx.size());
    if (want == ctx.unlabeled_idx.size()) {
      hints = ctx.unlabeled_idx;
    } else {
      Rng rng = step_rng(ctx, "hintsvm");
      hints = rng.sample_without_replacement(ctx.unlabeled_idx, want);
      std::sort(hints.begin(), hints.end());
    }
  }

  const Index nl = ctx.labeled_idx.size();
  const Index nh = hints.size();
  Matrix base(static_cast<Eigen::Index>(nl + nh), xl.cols());
  base.topRows(static_cast<Eigen::Index>(nl)) = xl;
  if (nh) base.bottomRows(static_cast<Eigen::Index>(nh)) = ctx.pool->gather(hints);

  double gamma = gamma_scale(base);
  Matrix gram_base = rbf_kernel(base, base, gamma);

  // Hint rows enter twice, once per pseudo-label, with an epsilon-free pull
  // toward the hyperplane (dual linear term 0) and their own cost.
  const Index ext = nl + 2 * nh;
  std::vector<Index> base_row(ext);
  SmoProblem prob;
  prob.y.resize(ext);
  prob.c.resize(ext);
  prob.p.resize(ext);
  for (Index i = 0; i < nl; ++i) {
    base_row[i] = i;
    prob.y[i] = yl[i] == 1 ? 1.0 : -1.0;
    prob.c[i] = 1.0;
    prob.p[i] = -1.0;
  }
  for (Index hcopy = 0; hcopy < 2 * nh; ++hcopy) {
    Index h = hcopy % nh;
    base_row[nl + hcopy] = nl + h;
    prob.y[nl + hcopy] = hcopy < nh ? 1.0 : -1.0;
    prob.c[nl + hcopy] = c_hint_;
    prob.p[nl + hcopy] = 0.0;
  }

  Matrix gram_ext(static_cast<Eigen::Index>(ext), static_cast<Eigen::Index>(ext));
  for (Index i = 0; i < ext; ++i)
    for (Index j = 0; j < ext; ++j)
      gram_ext(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          gram_base(static_cast<Eigen::Index>(base_row[i]),
                    static_cast<Eigen::Index>(base_row[j]));

  prob.gram = &gram_ext;
  prob.tol = 1e-4;
  SmoResult sol = solve_smo(prob);

  Matrix xu = ctx.unlabeled_features();
  Matrix kcand = rbf_kernel(xu, base, gamma);
  std::vector<double> score(ctx.unlabeled_idx.size());
  for (Index i = 0; i < ctx.unlabeled_idx.size(); ++i) {
    double f = sol.bias;
    for (Index t = 0; t < ext; ++t) {
      if (sol.alpha[t] <= 0) continue;
      f += sol.alpha[t] * prob.y[t] *
           kcand(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(base_row[t]));
    }
    score[i] = -std::abs(f);  // closest to the hinted boundary first
  }

  QuerySelection sel;
  sel.chosen_idx = top_indices_desc(ctx.unlabeled_idx, score, ctx.batch_size);
  sel.scores = std::move(score);
  return sel;
}

// ---- active learning by learning (EXP4.P over strategies) -------------------------

AlblStrategy::AlblStrategy()
    : AlblStrategy(std::vector<StrategyId>{StrategyId::parse("us"),
                                           StrategyId::parse("qbc"),
                                           StrategyId::parse("kcenter"),
                                           StrategyId::parse("uniform")}) {}

AlblStrategy::AlblStrategy(std::vector<StrategyId> arms)
    : arm_ids_(std::move(arms)) {
  if (arm_ids_.empty()) throw StrategyError("albl: needs at least one arm");
  log_w_.assign(arm_ids_.size(), 0.0);
}

void AlblStrategy::begin_trial(const PoolView& pool, const IndexList& train_idx) {
  arms_.clear();
  for (const auto& id : arm_ids_) {
    arms_.push_back(make_strategy(id));
    arms_.back()->begin_trial(pool, train_idx);
  }
  log_w_.assign(arm_ids_.size(), 0.0);
  history_.clear();
  initialized_ = true;
}

std::vector<double> AlblStrategy::mixture() const {
  const Index k = log_w_.size();
  double mx = *std::max_element(log_w_.begin(), log_w_.end());
  double sum = 0;
  std::vector<double> p(k);
  for (Index i = 0; i < k; ++i) {
    p[i] = std::exp(log_w_[i] - mx);
    sum += p[i];
  }
  double coverage = 1.0 - static_cast<double>(k) * pmin_;
  for (Index i = 0; i < k; ++i) p[i] = coverage * p[i] / sum + pmin_;
  return p;
}

QuerySelection AlblStrategy::select(const QueryContext& ctx) {
  ctx.validate();
  if (!initialized_) begin_trial(*ctx.pool, merged_pool_indices(ctx));
  const Index n_arms = arms_.size();
  const double horizon = std::max<double>(static_cast<double>(ctx.budget), 1.0);
  pmin_ = std::min(1.0 / static_cast<double>(n_arms),
                   std::sqrt(std::log(static_cast<double>(n_arms)) /
                             (static_cast<double>(n_arms) * horizon)));
  if (n_arms == 1) pmin_ = 1.0;
  const double bonus =
      std::sqrt(std::log(static_cast<double>(n_arms) / 0.1) /
                (static_cast<double>(n_arms) * horizon));

  QuerySelection sel;
  Rng rng = step_rng(ctx, "albl");

  IndexList remaining = ctx.unlabeled_idx;
  for (Index pick = 0; pick < ctx.batch_size; ++pick) {
    QueryContext sub = ctx;
    sub.unlabeled_idx = remaining;
    sub.batch_size = 1;
    sub.step = ctx.step + pick;

    // One-hot recommendation per arm.
    std::vector<Index> rec(n_arms);
    for (Index a = 0; a < n_arms; ++a)
      rec[a] = arms_[a]->select(sub).chosen_idx.at(0);

    std::vector<double> p = mixture();
    std::vector<double> q(remaining.size(), 0.0);
    for (Index a = 0; a < n_arms; ++a) {
      auto it = std::lower_bound(remaining.begin(), remaining.end(), rec[a]);
      q[static_cast<Index>(it - remaining.begin())] += p[a];
    }

    double target = rng.uniform();
    double acc = 0;
    Index chosen_pos = remaining.size() - 1;
    for (Index i = 0; i < remaining.size(); ++i) {
      acc += q[i];
      if (q[i] > 0 && acc >= target) {
        chosen_pos = i;
        break;
      }
    }
    while (q[chosen_pos] <= 0) --chosen_pos;
    Index chosen = remaining[chosen_pos];
    double q_chosen = q[chosen_pos];

    // Reward for the previous decisions: importance-weighted accuracy of the
    // current model over everything this strategy queried so far.
    double reward = -1;
    if (!history_.empty()) {
      if (reward_override) {
        reward = 0;  // per-entry override applied below
      } else if (ctx.evaluator) {
        IndexList rows;
        for (const auto& hqueried : history_) rows.push_back(hqueried.idx);
        Matrix xh = ctx.pool->gather(rows);
        Labels pred = predict(*ctx.evaluator, xh);
        double num = 0, den = 0;
        for (Index hi = 0; hi < history_.size(); ++hi) {
          double w = 1.0 / std::max(history_[hi].q, 1e-6);
          den += w;
          if (pred[hi] == ctx.pool->label(history_[hi].idx)) num += w;
        }
        reward = den > 0 ? num / den : 0.0;
      }
    }
    if (reward >= 0 || reward_override) {
      double r = reward_override ? reward_override(chosen) : reward;
      for (Index a = 0; a < n_arms; ++a) {
        double phi = rec[a] == chosen ? 1.0 : 0.0;
        double yhat = r * phi / std::max(q_chosen, 1e-9);
        double vhat = phi / std::max(q_chosen, 1e-9);
        log_w_[a] += 0.5 * pmin_ * (yhat + vhat * bonus);
      }
    }

    history_.push_back({chosen, q_chosen});
    sel.chosen_idx.push_back(chosen);
    remaining.erase(remaining.begin() + static_cast<long>(chosen_pos));
  }
  return sel;
}

}  // namespace albench::detail
