#include "albench/bso.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace albench {

namespace {

struct PoolEval {
  double acc = 0, auc = 0, f1 = 0;
};

std::uint64_t pool_hash(const IndexList& sorted_pool) {
  std::uint64_t h = fnv1a64("bso-pool");
  for (Index i : sorted_pool) h = hash_mix(h, i);
  return h;
}

struct BeamEntry {
  IndexList pool;   // sorted labeled indices
  IndexList order;  // queried points in order
  PoolEval eval;
};

}  // namespace

TrialResult beam_search_oracle(const Dataset& ds, const TrialSplit& split,
                               const ExperimentConfig& cfg, int trial) {
  const Index width = cfg.bso_width;
  if (width < 1) throw StrategyError("bso: width must be >= 1");

  IndexList pool0 = split.initial_labeled_idx;
  Index available = split.train_idx.size() - pool0.size();
  Index budget = cfg.bso_budget == 0 ? available : cfg.bso_budget;
  if (budget > available)
    throw StrategyError("bso: budget " + std::to_string(budget) +
                        " exceeds the unlabeled pool of " +
                        std::to_string(available));

  Matrix test_x(static_cast<Eigen::Index>(split.test_idx.size()),
                ds.features.cols());
  Labels test_y(split.test_idx.size());
  for (Index i = 0; i < split.test_idx.size(); ++i) {
    test_x.row(static_cast<Eigen::Index>(i)) =
        ds.features.row(static_cast<Eigen::Index>(split.test_idx[i]));
    test_y[i] = ds.labels[split.test_idx[i]];
  }

  std::unordered_map<std::uint64_t, PoolEval> cache;
  auto evaluate_pool = [&](const IndexList& pool) -> PoolEval {
    std::uint64_t key = pool_hash(pool);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    Matrix x(static_cast<Eigen::Index>(pool.size()), ds.features.cols());
    Labels y(pool.size());
    for (Index i = 0; i < pool.size(); ++i) {
      x.row(static_cast<Eigen::Index>(i)) =
          ds.features.row(static_cast<Eigen::Index>(pool[i]));
      y[i] = ds.labels[pool[i]];
    }
    PoolEval ev;
    Matrix proba;
    {
      TrainedModel model = fit(cfg.evaluator, x, y);
      proba = predict_proba(model, test_x);
    }
    if (proba.cols() < ds.k_classes) {
      Matrix full = Matrix::Zero(proba.rows(), ds.k_classes);
      full.leftCols(proba.cols()) = proba;
      proba = full;
    }
    Labels pred = argmax_rows(proba);
    ev.acc = accuracy(test_y, pred);
    try {
      ev.auc = auc(test_y, proba);
    } catch (const MetricError&) {
      ev.auc = 0.5;
    }
    ev.f1 = f1(test_y, pred, ds.k_classes);
    cache.emplace(key, ev);
    return ev;
  };

  TrialResult result;
  result.acc_curve.kind = MetricKind::Acc;
  result.auc_curve.kind = MetricKind::Auc;
  result.f1_curve.kind = MetricKind::F1;

  std::vector<BeamEntry> beam;
  beam.push_back({pool0, {}, evaluate_pool(pool0)});
  result.acc_curve.points.emplace_back(pool0.size(), beam[0].eval.acc);
  result.auc_curve.points.emplace_back(pool0.size(), beam[0].eval.auc);
  result.f1_curve.points.emplace_back(pool0.size(), beam[0].eval.f1);

  for (Index step = 0; step < budget; ++step) {
    auto clock_start = std::chrono::steady_clock::now();
    std::vector<BeamEntry> children;

    for (Index bi = 0; bi < beam.size(); ++bi) {
      const BeamEntry& parent = beam[bi];
      IndexList candidates;
      {
        std::set<Index> in_pool(parent.pool.begin(), parent.pool.end());
        for (Index g : split.train_idx)
          if (!in_pool.count(g)) candidates.push_back(g);
      }
      if (cfg.bso_candidate_cap > 0 &&
          candidates.size() > cfg.bso_candidate_cap) {
        Rng rng(derive_seed(cfg.master_seed,
                            ds.name + "#" + std::to_string(trial),
                            hash_mix(step, pool_hash(parent.pool)),
                            "bso-candidates"));
        candidates =
            rng.sample_without_replacement(candidates, cfg.bso_candidate_cap);
        std::sort(candidates.begin(), candidates.end());
      }

      // Per-pool children, kept to the best `width`.
      std::vector<BeamEntry> local;
      for (Index g : candidates) {
        BeamEntry child;
        child.pool = parent.pool;
        child.pool.insert(
            std::lower_bound(child.pool.begin(), child.pool.end(), g), g);
        child.order = parent.order;
        child.order.push_back(g);
        child.eval = evaluate_pool(child.pool);
        local.push_back(std::move(child));
      }
      std::sort(local.begin(), local.end(),
                [](const BeamEntry& a, const BeamEntry& b) {
                  if (a.eval.acc != b.eval.acc) return a.eval.acc > b.eval.acc;
                  return a.pool < b.pool;
                });
      if (local.size() > width) local.resize(width);
      for (auto& c : local) children.push_back(std::move(c));
    }

    // Merge duplicates (same labeled set), then prune to the global width.
    std::sort(children.begin(), children.end(),
              [](const BeamEntry& a, const BeamEntry& b) {
                if (a.pool != b.pool) return a.pool < b.pool;
                return a.order < b.order;
              });
    children.erase(std::unique(children.begin(), children.end(),
                               [](const BeamEntry& a, const BeamEntry& b) {
                                 return a.pool == b.pool;
                               }),
                   children.end());
    std::sort(children.begin(), children.end(),
              [](const BeamEntry& a, const BeamEntry& b) {
                if (a.eval.acc != b.eval.acc) return a.eval.acc > b.eval.acc;
                return a.pool < b.pool;
              });
    if (children.size() > width) children.resize(width);
    if (children.empty()) throw StrategyError("bso: beam ran out of candidates");
    beam = std::move(children);

    const BeamEntry& best = beam.front();
    result.acc_curve.points.emplace_back(best.pool.size(), best.eval.acc);
    result.auc_curve.points.emplace_back(best.pool.size(), best.eval.auc);
    result.f1_curve.points.emplace_back(best.pool.size(), best.eval.f1);
    result.timings.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      clock_start)
            .count());
  }

  result.selections = beam.front().order;
  return result;
}

ExperimentResult run_bso(const ExperimentConfig& cfg,
                         const std::vector<Dataset>& datasets,
                         const RunOptions& opts) {
  for (const auto& ds : datasets) ds.validate();
  if (cfg.n_trials < 1) throw ConfigError("config: n_trials must be >= 1");

  struct Cell {
    Index dataset;
    int trial;
  };
  std::vector<Cell> cells;
  for (Index d = 0; d < datasets.size(); ++d)
    for (int t = 0; t < cfg.n_trials; ++t) cells.push_back({d, t});

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
  const std::string kBso = "bso";

  auto worker = [&]() {
    for (;;) {
      Index i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      const Dataset& ds = datasets[cell.dataset];
      if (prior.completed.count(cell_key(ds.name, kBso, cell.trial))) {
        skipped.fetch_add(1);
        continue;
      }

      SplitHashRow split_row{ds.name, kBso, cell.trial, ""};
      try {
        TrialSplit split = trial_split(ds, cfg, cell.trial);
        split_row.hash = to_hex(split.hash());
        TrialResult tr = beam_search_oracle(ds, split, cfg, cell.trial);

        AubcRecord rec{ds.name, kBso, cell.trial, aubc(tr.acc_curve),
                       aubc(tr.auc_curve), aubc(tr.f1_curve)};
        std::vector<CurveRow> curve_rows;
        for (Index p = 0; p < tr.acc_curve.points.size(); ++p)
          curve_rows.push_back(CurveRow{
              ds.name, kBso, cell.trial, tr.acc_curve.points[p].first,
              tr.acc_curve.points[p].second, tr.auc_curve.points[p].second,
              tr.f1_curve.points[p].second});

        writer.append(rec, curve_rows, split_row);
        std::lock_guard<std::mutex> lock(result_mu);
        result.records.push_back(std::move(rec));
        result.curves.insert(result.curves.end(), curve_rows.begin(),
                             curve_rows.end());
        result.split_hashes.push_back(std::move(split_row));
      } catch (const std::exception& e) {
        FailureRow fail{ds.name, kBso, cell.trial, e.what()};
        writer.append_failure(fail, split_row.hash.empty() ? nullptr : &split_row);
        std::lock_guard<std::mutex> lock(result_mu);
        if (!split_row.hash.empty()) result.split_hashes.push_back(split_row);
        result.failures.push_back(std::move(fail));
        if (opts.log) opts.log("bso cell failed: " + fail.dataset + "/" +
                               std::to_string(fail.trial) + ": " + fail.error);
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

std::vector<BsoMeans> bso_difficulty_inputs(const ExperimentResult& bso_result) {
  std::map<std::string, BsoMeans> acc;
  for (const auto& r : bso_result.records) {
    if (r.strategy != "bso") continue;
    BsoMeans& m = acc[r.dataset];
    m.dataset = r.dataset;
    m.acc += r.aubc_acc;
    m.auc += r.aubc_auc;
    m.f1 += r.aubc_f1;
    m.trials += 1;
  }
  std::vector<BsoMeans> out;
  for (auto& [name, m] : acc) {
    m.acc /= m.trials;
    m.auc /= m.trials;
    m.f1 /= m.trials;
    out.push_back(m);
  }
  return out;
}

}  // namespace albench
