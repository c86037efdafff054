#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "albench/kernels.hpp"
#include "strategies_impl.hpp"

namespace albench {

namespace {

const std::map<std::string, StrategyFamily>& family_names() {
  static const std::map<std::string, StrategyFamily> names = {
      {"uniform", StrategyFamily::Uniform},
      {"us", StrategyFamily::UsLc},
      {"us_lc", StrategyFamily::UsLc},
      {"us_margin", StrategyFamily::UsMargin},
      {"us_entropy", StrategyFamily::UsEntropy},
      {"qbc", StrategyFamily::QbcVe},
      {"qbc_ve", StrategyFamily::QbcVe},
      {"qbc_kl", StrategyFamily::QbcKl},
      {"dwus", StrategyFamily::Dwus},
      {"kcenter", StrategyFamily::KCenter},
      {"graph", StrategyFamily::Graph},
      {"margin", StrategyFamily::MarginMmd},
      {"hier", StrategyFamily::Hier},
      {"infodiv", StrategyFamily::InfoDiv},
      {"mcm", StrategyFamily::Mcm},
      {"quire", StrategyFamily::Quire},
      {"albl", StrategyFamily::Albl},
      {"hintsvm", StrategyFamily::HintSvm},
      {"vr", StrategyFamily::Vr},
  };
  return names;
}

std::string canonical_family(StrategyFamily family) {
  switch (family) {
    case StrategyFamily::Uniform: return "uniform";
    case StrategyFamily::UsLc: return "us";
    case StrategyFamily::UsMargin: return "us_margin";
    case StrategyFamily::UsEntropy: return "us_entropy";
    case StrategyFamily::QbcVe: return "qbc";
    case StrategyFamily::QbcKl: return "qbc_kl";
    case StrategyFamily::Dwus: return "dwus";
    case StrategyFamily::KCenter: return "kcenter";
    case StrategyFamily::Graph: return "graph";
    case StrategyFamily::MarginMmd: return "margin";
    case StrategyFamily::Hier: return "hier";
    case StrategyFamily::InfoDiv: return "infodiv";
    case StrategyFamily::Mcm: return "mcm";
    case StrategyFamily::Quire: return "quire";
    case StrategyFamily::Albl: return "albl";
    case StrategyFamily::HintSvm: return "hintsvm";
    case StrategyFamily::Vr: return "vr";
  }
  return "uniform";
}

}  // namespace

std::string StrategyId::to_string() const {
  return canonical_family(family) + "-" + std::to_string(batch_size);
}

StrategyId StrategyId::parse(const std::string& id) {
  std::string name = id;
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  StrategyId out;
  out.batch_size = 1;
  auto dash = name.find_last_of('-');
  if (dash != std::string::npos) {
    const std::string suffix = name.substr(dash + 1);
    if (!suffix.empty() &&
        std::all_of(suffix.begin(), suffix.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
      out.batch_size = static_cast<Index>(std::stoul(suffix));
      name = name.substr(0, dash);
    }
  }
  auto it = family_names().find(name);
  if (it == family_names().end())
    throw StrategyError("unknown strategy id: " + id);
  if (out.batch_size < 1)
    throw StrategyError("strategy batch size must be >= 1: " + id);
  out.family = it->second;
  return out;
}

// ---- PoolView ---------------------------------------------------------------

PoolView::PoolView(const Dataset& ds, const IndexList& train_rows) : ds_(&ds) {
  allowed_.assign(ds.n(), 0);
  labeled_.assign(ds.n(), 0);
  for (Index i : train_rows) {
    if (i >= ds.n()) throw FirewallError("train index out of range");
    allowed_[i] = 1;
  }
}

Eigen::RowVectorXd PoolView::row(Index i) const {
  if (i >= allowed_.size() || !allowed_[i])
    throw FirewallError("strategy touched a non-train row: " + std::to_string(i));
  return ds_->features.row(static_cast<Eigen::Index>(i));
}

Matrix PoolView::gather(const IndexList& rows) const {
  Matrix out(static_cast<Eigen::Index>(rows.size()), ds_->features.cols());
  for (Index r = 0; r < rows.size(); ++r)
    out.row(static_cast<Eigen::Index>(r)) = row(rows[r]);
  return out;
}

int PoolView::label(Index i) const {
  if (i >= allowed_.size() || !allowed_[i])
    throw FirewallError("strategy touched a non-train label: " + std::to_string(i));
  if (!labeled_[i])
    throw FirewallError("strategy read the label of an unqueried point: " +
                        std::to_string(i));
  return ds_->labels[i];
}

void PoolView::set_labeled(const IndexList& labeled) {
  std::fill(labeled_.begin(), labeled_.end(), 0);
  for (Index i : labeled) labeled_[i] = 1;
}

void QueryContext::validate() const {
  if (!pool) throw StrategyError("query context has no pool");
  if (batch_size < 1) throw StrategyError("batch size must be >= 1");
  if (batch_size > unlabeled_idx.size())
    throw StrategyError("pool exhausted: batch size " +
                        std::to_string(batch_size) + " > " +
                        std::to_string(unlabeled_idx.size()) + " candidates");
  std::set<Index> l(labeled_idx.begin(), labeled_idx.end());
  for (Index i : unlabeled_idx)
    if (l.count(i))
      throw StrategyError("labeled and unlabeled pools overlap at " +
                          std::to_string(i));
}

Labels QueryContext::labeled_labels() const {
  Labels y(labeled_idx.size());
  for (Index i = 0; i < labeled_idx.size(); ++i)
    y[i] = pool->label(labeled_idx[i]);
  return y;
}

// ---- shared helpers ---------------------------------------------------------

namespace detail {

Matrix proba_at(const QueryContext& ctx, const IndexList& rows) {
  if (!ctx.evaluator) throw StrategyError("context carries no fitted evaluator");
  return predict_proba(*ctx.evaluator, ctx.pool->gather(rows));
}

std::vector<double> entropy_rows(const Matrix& proba) {
  std::vector<double> h(static_cast<Index>(proba.rows()), 0.0);
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    double e = 0;
    for (Eigen::Index c = 0; c < proba.cols(); ++c) {
      double p = proba(i, c);
      if (p > 0) e -= p * std::log(p);
    }
    h[static_cast<Index>(i)] = e;
  }
  return h;
}

Rng step_rng(const QueryContext& ctx, const char* role) {
  return Rng(derive_seed(ctx.strategy_seed, role, ctx.step, "strategy-step"));
}

IndexList merged_pool_indices(const QueryContext& ctx) {
  IndexList all = ctx.labeled_idx;
  all.insert(all.end(), ctx.unlabeled_idx.begin(), ctx.unlabeled_idx.end());
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace detail

IndexList top_indices_desc(const IndexList& candidates,
                           const std::vector<double>& scores, Index s) {
  if (candidates.size() != scores.size())
    throw StrategyError("score vector does not match candidate count");
  std::vector<Index> order(candidates.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return candidates[a] < candidates[b];
  });
  IndexList out;
  out.reserve(s);
  for (Index i = 0; i < s && i < order.size(); ++i)
    out.push_back(candidates[order[i]]);
  return out;
}

double vote_entropy(const std::vector<int>& votes, int k_classes) {
  std::vector<double> counts(static_cast<Index>(k_classes), 0.0);
  for (int v : votes) counts[static_cast<Index>(v)] += 1.0;
  double c = static_cast<double>(votes.size());
  double h = 0;
  for (double v : counts) {
    if (v > 0) {
      double f = v / c;
      h -= f * std::log(f);
    }
  }
  return h;
}

double mean_kl_to_consensus(const std::vector<Vector>& member_rows) {
  const Index c = member_rows.size();
  Vector consensus = Vector::Zero(member_rows[0].size());
  for (const auto& row : member_rows) consensus += row;
  consensus /= static_cast<double>(c);
  double total = 0;
  for (const auto& row : member_rows) {
    for (Eigen::Index i = 0; i < row.size(); ++i) {
      double p = row(i);
      if (p > 0 && consensus(i) > 0) total += p * std::log(p / consensus(i));
    }
  }
  return total / static_cast<double>(c);
}

// ---- selection primitives ----------------------------------------------------

QuerySelection select_uniform(const QueryContext& ctx) {
  ctx.validate();
  Rng rng = detail::step_rng(ctx, "uniform");
  QuerySelection sel;
  sel.chosen_idx =
      rng.sample_without_replacement(ctx.unlabeled_idx, ctx.batch_size);
  return sel;
}

QuerySelection select_us(const QueryContext& ctx, UsVariant variant,
                         const Matrix& proba) {
  ctx.validate();
  if (static_cast<Index>(proba.rows()) != ctx.unlabeled_idx.size())
    throw StrategyError("us: proba rows must match candidates");
  std::vector<double> score(ctx.unlabeled_idx.size(), 0.0);
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    switch (variant) {
      case UsVariant::Lc:
        score[static_cast<Index>(i)] = 1.0 - proba.row(i).maxCoeff();
        break;
      case UsVariant::Margin: {
        double first = -1, second = -1;
        for (Eigen::Index c = 0; c < proba.cols(); ++c) {
          double p = proba(i, c);
          if (p > first) {
            second = first;
            first = p;
          } else if (p > second) {
            second = p;
          }
        }
        score[static_cast<Index>(i)] = -(first - second);  // small margin first
        break;
      }
      case UsVariant::Entropy: {
        double h = 0;
        for (Eigen::Index c = 0; c < proba.cols(); ++c) {
          double p = proba(i, c);
          if (p > 0) h -= p * std::log(p);
        }
        score[static_cast<Index>(i)] = h;
        break;
      }
    }
  }
  QuerySelection sel;
  sel.chosen_idx = top_indices_desc(ctx.unlabeled_idx, score, ctx.batch_size);
  sel.scores = std::move(score);
  return sel;
}

QuerySelection select_qbc(const QueryContext& ctx, QbcVariant variant,
                          const std::vector<Matrix>& committee_probas) {
  ctx.validate();
  if (committee_probas.size() < 2)
    throw StrategyError("qbc: committee needs >= 2 members");
  const Index n = ctx.unlabeled_idx.size();
  for (const auto& m : committee_probas)
    if (static_cast<Index>(m.rows()) != n)
      throw StrategyError("qbc: member proba rows must match candidates");

  const int k = static_cast<int>(committee_probas[0].cols());
  std::vector<double> score(n, 0.0);
  for (Index i = 0; i < n; ++i) {
    if (variant == QbcVariant::Ve) {
      std::vector<int> votes;
      votes.reserve(committee_probas.size());
      for (const auto& m : committee_probas) {
        int best = 0;
        for (int c = 1; c < k; ++c)
          if (m(static_cast<Eigen::Index>(i), c) >
              m(static_cast<Eigen::Index>(i), best))
            best = c;
        votes.push_back(best);
      }
      score[i] = vote_entropy(votes, k);
    } else {
      std::vector<Vector> rows;
      rows.reserve(committee_probas.size());
      for (const auto& m : committee_probas)
        rows.push_back(m.row(static_cast<Eigen::Index>(i)).transpose());
      score[i] = mean_kl_to_consensus(rows);
    }
  }
  QuerySelection sel;
  sel.chosen_idx = top_indices_desc(ctx.unlabeled_idx, score, ctx.batch_size);
  sel.scores = std::move(score);
  return sel;
}

QuerySelection select_dwus(const QueryContext& ctx, const Matrix& proba,
                           double sigma, double beta) {
  ctx.validate();
  const Index n = ctx.unlabeled_idx.size();
  if (static_cast<Index>(proba.rows()) != n)
    throw StrategyError("dwus: proba rows must match candidates");
  std::vector<double> entropy = detail::entropy_rows(proba);

  Matrix xu = ctx.unlabeled_features();
  Matrix sq = pairwise_sq_dist(xu, xu);
  double denom = 2.0 * sigma * sigma;
  std::vector<double> score(n, 0.0);
  for (Index i = 0; i < n; ++i) {
    double sim = 0;
    for (Index j = 0; j < n; ++j)
      sim += std::exp(-sq(static_cast<Eigen::Index>(i),
                          static_cast<Eigen::Index>(j)) /
                      denom);
    sim /= static_cast<double>(n);
    score[i] = entropy[i] * std::pow(sim, beta);
  }
  QuerySelection sel;
  sel.chosen_idx = top_indices_desc(ctx.unlabeled_idx, score, ctx.batch_size);
  sel.scores = std::move(score);
  return sel;
}

// ---- wrapper strategies -------------------------------------------------------

namespace detail {

QuerySelection UniformStrategy::select(const QueryContext& ctx) {
  return select_uniform(ctx);
}

QuerySelection UsStrategy::select(const QueryContext& ctx) {
  return select_us(ctx, variant_, proba_at(ctx, ctx.unlabeled_idx));
}

QuerySelection QbcStrategy::select(const QueryContext& ctx) {
  ctx.validate();
  Matrix xl = ctx.labeled_features();
  Labels yl = ctx.labeled_labels();
  Matrix xu = ctx.unlabeled_features();
  std::vector<Matrix> probas;
  for (const auto& spec : committee_specs(use_gpc_)) {
    TrainedModel member = fit(spec, xl, yl);
    Matrix p = predict_proba(member, xu);
    // Members trained on a label subset still vote over all classes.
    if (p.cols() < ctx.pool->k_classes()) {
      Matrix full = Matrix::Zero(p.rows(), ctx.pool->k_classes());
      full.leftCols(p.cols()) = p;
      p = full;
    }
    probas.push_back(std::move(p));
  }
  return select_qbc(ctx, variant_, probas);
}

void DwusStrategy::begin_trial(const PoolView& pool, const IndexList& train_idx) {
  sigma_ = median_pairwise_distance(pool.gather(train_idx));
}

QuerySelection DwusStrategy::select(const QueryContext& ctx) {
  return select_dwus(ctx, proba_at(ctx, ctx.unlabeled_idx), sigma_, 1.0);
}

}  // namespace detail

// ---- factory -------------------------------------------------------------------

std::unique_ptr<QueryStrategy> make_strategy(const StrategyId& id) {
  using namespace detail;
  switch (id.family) {
    case StrategyFamily::Uniform: return std::make_unique<UniformStrategy>();
    case StrategyFamily::UsLc: return std::make_unique<UsStrategy>(UsVariant::Lc);
    case StrategyFamily::UsMargin:
      return std::make_unique<UsStrategy>(UsVariant::Margin);
    case StrategyFamily::UsEntropy:
      return std::make_unique<UsStrategy>(UsVariant::Entropy);
    case StrategyFamily::QbcVe:
      return std::make_unique<QbcStrategy>(QbcVariant::Ve);
    case StrategyFamily::QbcKl:
      return std::make_unique<QbcStrategy>(QbcVariant::Kl);
    case StrategyFamily::Dwus: return std::make_unique<DwusStrategy>();
    case StrategyFamily::KCenter: return std::make_unique<KCenterStrategy>();
    case StrategyFamily::Graph: return std::make_unique<GraphStrategy>();
    case StrategyFamily::MarginMmd: return std::make_unique<MarginMmdStrategy>();
    case StrategyFamily::Hier: return std::make_unique<HierStrategy>();
    case StrategyFamily::InfoDiv: return std::make_unique<InfoDivStrategy>();
    case StrategyFamily::Mcm: return std::make_unique<McmStrategy>();
    case StrategyFamily::Quire: return std::make_unique<QuireStrategy>();
    case StrategyFamily::Albl: return std::make_unique<AlblStrategy>();
    case StrategyFamily::HintSvm: return std::make_unique<HintSvmStrategy>();
    case StrategyFamily::Vr: return std::make_unique<VrStrategy>();
  }
  throw StrategyError("unknown strategy family");
}

}  // namespace albench
