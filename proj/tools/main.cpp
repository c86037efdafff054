#include <CLI11.hpp>

#include <iostream>

#include "albench/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pool-based active learning benchmark"};
  app.require_subcommand(1);

  albench::RunArgs run_args;
  auto* run = app.add_subcommand("run", "execute an experiment grid");
  run->add_option("--config", run_args.config_path, "config file")->required();
  run->add_option("--out", run_args.out_dir, "output directory")->required();
  run->add_option("--workers", run_args.workers, "worker threads");
  std::uint64_t run_seed = 0;
  auto* run_seed_opt =
      run->add_option("--seed", run_seed, "override the master seed");
  run->add_option("--label-col", run_args.label_col,
                  "csv label column (default: last)");

  albench::BsoArgs bso_args;
  auto* bso = app.add_subcommand("bso", "beam-search oracle runs");
  bso->add_option("--config", bso_args.config_path, "config file")->required();
  bso->add_option("--out", bso_args.out_dir, "output directory")->required();
  bso->add_option("--workers", bso_args.workers, "worker threads");
  std::uint64_t bso_seed = 0;
  auto* bso_seed_opt =
      bso->add_option("--seed", bso_seed, "override the master seed");
  std::uint64_t bso_width = 0;
  auto* bso_width_opt = bso->add_option("--width", bso_width, "beam width");
  std::uint64_t bso_budget = 0;
  auto* bso_budget_opt =
      bso->add_option("--budget", bso_budget, "query budget (0 = full pool)");

  albench::AnalyzeArgs analyze_args;
  auto* analyze =
      app.add_subcommand("analyze", "win-tie-loss, rankings and difficulty");
  analyze->add_option("dir", analyze_args.results_dir, "run directory")
      ->required();
  analyze->add_option("--bso-dir", analyze_args.bso_dir,
                      "directory holding the BSO results");
  analyze->add_option("--out", analyze_args.out_dir, "output directory");
  analyze->add_option("--tie-threshold", analyze_args.tie_threshold,
                      "tie band on mean AUBC");
  analyze->add_flag("--relative-ties", analyze_args.relative_ties,
                    "tie band relative to the larger AUBC");

  albench::PlotArgs plot_args;
  auto* plot = app.add_subcommand("plot", "emit budget-curve SVGs");
  plot->add_option("dir", plot_args.results_dir, "run directory")->required();
  plot->add_option("--dataset", plot_args.dataset, "dataset name")->required();
  plot->add_option("--out", plot_args.out_dir, "output directory");

  albench::GenDataArgs gen_args;
  auto* gen = app.add_subcommand("gen-data", "materialize synthetic datasets");
  gen->add_option("--out", gen_args.out_dir, "output directory")->required();
  gen->add_option("--seed", gen_args.seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!run_seed_opt->empty()) run_args.seed = run_seed;
      return albench::cmd_run(run_args);
    }
    if (bso->parsed()) {
      if (!bso_seed_opt->empty()) bso_args.seed = bso_seed;
      if (!bso_width_opt->empty())
        bso_args.width = static_cast<albench::Index>(bso_width);
      if (!bso_budget_opt->empty())
        bso_args.budget = static_cast<albench::Index>(bso_budget);
      return albench::cmd_bso(bso_args);
    }
    if (analyze->parsed()) return albench::cmd_analyze(analyze_args);
    if (plot->parsed()) return albench::cmd_plot(plot_args);
    if (gen->parsed()) return albench::cmd_gen_data(gen_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
