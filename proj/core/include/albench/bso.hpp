#pragma once

#include "albench/protocol.hpp"

namespace albench {

// Beam search over query orders scored by test accuracy. This is the one
// component that reads the test partition on purpose; everything else goes
// through the strategy firewall.
//
// Width W keeps the best W labeled pools per step; every pool expands over the
// remaining candidates (or a seeded subsample of `cfg.bso_candidate_cap` of
// them), children prune to per-pool top W, the union to global top W.
// Duplicate pools merge; ties prefer the lexicographically smallest index set.
TrialResult beam_search_oracle(const Dataset& ds, const TrialSplit& split,
                               const ExperimentConfig& cfg, int trial = 0);

// Full BSO grid (datasets x trials) with the same splits, checkpointing, and
// CSV schema as run_experiment; rows carry strategy id "bso".
ExperimentResult run_bso(const ExperimentConfig& cfg,
                         const std::vector<Dataset>& datasets,
                         const RunOptions& opts = {});

// Mean BSO AUBC per (dataset, metric): the difficulty-table inputs.
struct BsoMeans {
  std::string dataset;
  double acc = 0, auc = 0, f1 = 0;
  int trials = 0;
};
std::vector<BsoMeans> bso_difficulty_inputs(const ExperimentResult& bso_result);

}  // namespace albench
