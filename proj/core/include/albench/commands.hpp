#pragma once

#include <optional>
#include <string>

#include "albench/common.hpp"

namespace albench {

// Exit codes: 0 success (individual trial failures are reported, not fatal),
// 2 invalid configuration or unusable inputs.

struct RunArgs {
  std::string config_path;
  std::string out_dir;
  int workers = 1;
  std::optional<std::uint64_t> seed;  // overrides the config master seed
  int label_col = -1;                 // csv label column override
};

int cmd_run(const RunArgs& args);

struct BsoArgs {
  std::string config_path;
  std::string out_dir;
  int workers = 1;
  std::optional<std::uint64_t> seed;
  std::optional<Index> width;
  std::optional<Index> budget;
};

int cmd_bso(const BsoArgs& args);

struct AnalyzeArgs {
  std::string results_dir;
  std::string bso_dir;  // optional; defaults to results_dir
  std::string out_dir;  // empty = results_dir
  double tie_threshold = 0.005;
  bool relative_ties = false;
};

int cmd_analyze(const AnalyzeArgs& args);

struct PlotArgs {
  std::string results_dir;
  std::string dataset;
  std::string out_dir;  // empty = results_dir
};

int cmd_plot(const PlotArgs& args);

struct GenDataArgs {
  std::string out_dir;
  std::uint64_t seed = 0;
};

int cmd_gen_data(const GenDataArgs& args);

// Default data directory: $ALBENCH_DATA_DIR or ./data.
std::string default_data_dir();

}  // namespace albench
