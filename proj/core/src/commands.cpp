#include "albench/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <nlohmann/json.hpp>

#include "albench/analysis.hpp"
#include "albench/bso.hpp"
#include "albench/config.hpp"
#include "albench/report.hpp"

namespace albench {

namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::vector<Dataset> resolve_datasets(const ExperimentConfig& cfg) {
  std::vector<RegistryEntry> registry;
  std::string data_dir = cfg.data_dir.empty() ? default_data_dir() : cfg.data_dir;
  std::string registry_path = cfg.registry_path;
  if (registry_path.empty() && fs::exists(data_dir + "/registry.json"))
    registry_path = data_dir + "/registry.json";
  if (!registry_path.empty()) registry = load_registry(registry_path);

  std::vector<Dataset> datasets;
  for (const auto& name : cfg.datasets)
    datasets.push_back(resolve_dataset(name, registry, data_dir,
                                       cfg.master_seed, cfg.default_label_col));
  return datasets;
}

void write_manifest(const std::string& out_dir, const std::string& config_path,
                    const ExperimentConfig& cfg, const std::string& command,
                    const std::string& start, const std::string& end) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["config_path"] = config_path;
  j["resolved_config"] = config_to_text(cfg);
  j["output_dir"] = out_dir;
  j["master_seed"] = cfg.master_seed;
  j["csv_schema_version"] = 1;
  j["started_at"] = start;
  if (!end.empty()) j["finished_at"] = end;
  std::ofstream out(out_dir + "/manifest.json", std::ios::trunc);
  out << j.dump(2) << "\n";
}

void write_datasets_csv(const std::string& out_dir,
                        const std::vector<Dataset>& datasets) {
  std::ofstream out(out_dir + "/datasets.csv", std::ios::trunc);
  out << "dataset,origin,n,d,k,tags\n";
  for (const auto& ds : datasets) {
    DatasetTags tags = derive_tags(ds);
    out << ds.name << ','
        << (ds.origin == Origin::Real ? "real" : "synthetic") << ',' << ds.n()
        << ',' << ds.d() << ',' << ds.k_classes << ',' << tags.to_string()
        << '\n';
  }
}

std::vector<AubcRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open results file: " + path);
  std::vector<AubcRecord> records;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    cells.push_back(cur);
    if (cells.size() != 6) continue;
    records.push_back(AubcRecord{cells[0], cells[1], std::stoi(cells[2]),
                                 std::strtod(cells[3].c_str(), nullptr),
                                 std::strtod(cells[4].c_str(), nullptr),
                                 std::strtod(cells[5].c_str(), nullptr)});
  }
  return records;
}

std::vector<CurveRow> read_curves_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open curves file: " + path);
  std::vector<CurveRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    cells.push_back(cur);
    if (cells.size() != 7) continue;
    rows.push_back(CurveRow{cells[0], cells[1], std::stoi(cells[2]),
                            static_cast<Index>(std::stoul(cells[3])),
                            std::strtod(cells[4].c_str(), nullptr),
                            std::strtod(cells[5].c_str(), nullptr),
                            std::strtod(cells[6].c_str(), nullptr)});
  }
  return rows;
}

std::map<std::string, DatasetTags> read_tags_csv(const std::string& path) {
  std::map<std::string, DatasetTags> tags;
  std::ifstream in(path);
  if (!in) return tags;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    cells.push_back(cur);
    if (cells.size() != 6) continue;
    DatasetTags t;
    t.real = cells[1] == "real";
    Index n = static_cast<Index>(std::stoul(cells[2]));
    Index d = static_cast<Index>(std::stoul(cells[3]));
    int k = std::stoi(cells[4]);
    t.binary = k == 2;
    t.low_dim = d < 50;
    t.small_scale = n < 1000;
    tags[cells[0]] = t;
  }
  return tags;
}

}  // namespace

std::string default_data_dir() {
  const char* env = std::getenv("ALBENCH_DATA_DIR");
  if (env && *env) return env;
  return "data";
}

int cmd_run(const RunArgs& args) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config_file(args.config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (args.seed) cfg.master_seed = *args.seed;
  if (args.label_col >= 0) cfg.default_label_col = args.label_col;

  std::vector<Dataset> datasets;
  try {
    datasets = resolve_datasets(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  fs::create_directories(args.out_dir);
  const std::string start = iso_timestamp();
  write_manifest(args.out_dir, args.config_path, cfg, "run", start, "");
  write_datasets_csv(args.out_dir, datasets);

  RunOptions opts;
  opts.out_dir = args.out_dir;
  opts.workers = args.workers;
  opts.log = [](const std::string& msg) { std::cerr << msg << "\n"; };

  ExperimentResult result = run_experiment(cfg, datasets, opts);
  write_manifest(args.out_dir, args.config_path, cfg, "run", start,
                 iso_timestamp());

  std::cout << "completed cells: " << result.records.size()
            << " (skipped from checkpoint: " << result.skipped_cells
            << ", failed: " << result.failures.size() << ")\n";
  if (!result.failures.empty()) {
    std::cout << "failure report:\n";
    for (const auto& f : result.failures)
      std::cout << "  " << f.dataset << "/" << f.strategy << "/trial " << f.trial
                << ": " << f.error << "\n";
  }
  return 0;
}

int cmd_bso(const BsoArgs& args) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config_file(args.config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (args.seed) cfg.master_seed = *args.seed;
  if (args.width) cfg.bso_width = *args.width;
  if (args.budget) cfg.bso_budget = *args.budget;
  if (cfg.bso_width < 1) {
    std::cerr << "error: bso width must be >= 1\n";
    return 2;
  }

  std::vector<Dataset> datasets;
  try {
    datasets = resolve_datasets(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  fs::create_directories(args.out_dir);
  const std::string start = iso_timestamp();
  write_manifest(args.out_dir, args.config_path, cfg, "bso", start, "");
  write_datasets_csv(args.out_dir, datasets);

  RunOptions opts;
  opts.out_dir = args.out_dir;
  opts.workers = args.workers;
  opts.log = [](const std::string& msg) { std::cerr << msg << "\n"; };

  ExperimentResult result = run_bso(cfg, datasets, opts);
  write_manifest(args.out_dir, args.config_path, cfg, "bso", start,
                 iso_timestamp());

  std::cout << "completed bso cells: " << result.records.size()
            << " (skipped from checkpoint: " << result.skipped_cells
            << ", failed: " << result.failures.size() << ")\n";
  return 0;
}

int cmd_analyze(const AnalyzeArgs& args) {
  const std::string results_path = args.results_dir + "/results.csv";
  if (!fs::exists(results_path)) {
    std::cerr << "error: no results.csv under " << args.results_dir << "\n";
    return 2;
  }
  std::vector<AubcRecord> records;
  try {
    records = read_records_csv(results_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (records.empty()) {
    std::cerr << "error: results.csv has no records\n";
    return 2;
  }

  // BSO rows may live in the same results or in a separate run directory.
  std::vector<AubcRecord> bso_records;
  std::vector<AubcRecord> strategy_records;
  for (auto& r : records)
    (r.strategy == "bso" ? bso_records : strategy_records).push_back(r);
  std::string bso_dir = args.bso_dir.empty() ? args.results_dir : args.bso_dir;
  if (bso_records.empty() && fs::exists(bso_dir + "/results.csv") &&
      bso_dir != args.results_dir) {
    for (auto& r : read_records_csv(bso_dir + "/results.csv"))
      if (r.strategy == "bso") bso_records.push_back(r);
  }
  if (strategy_records.empty()) {
    std::cerr << "error: no strategy records to analyze\n";
    return 2;
  }

  const std::string out_dir =
      args.out_dir.empty() ? args.results_dir : args.out_dir;
  fs::create_directories(out_dir);

  AubcTable table = AubcTable::from_records(strategy_records);
  std::vector<WtlRecord> wtl;
  for (MetricKind m : {MetricKind::Acc, MetricKind::Auc, MetricKind::F1}) {
    auto part = pairwise_wtl(table, m, args.tie_threshold, args.relative_ties);
    wtl.insert(wtl.end(), part.begin(), part.end());
  }
  auto ranking = alpha_rank(wtl);

  std::vector<GroupRanking> groups;
  auto tags = read_tags_csv(args.results_dir + "/datasets.csv");
  bool have_tags = true;
  for (const auto& ds : table.datasets)
    if (!tags.count(ds)) have_tags = false;
  std::vector<std::string> warnings;
  if (have_tags) {
    groups = group_rank(table, tags, args.tie_threshold, &warnings);
  } else {
    warnings.push_back("datasets.csv missing or incomplete; property-group "
                       "rankings skipped");
  }

  {
    std::ofstream out(out_dir + "/ranking.csv", std::ios::trunc);
    out << render_ranking_csv(ranking, groups);
  }
  {
    std::ofstream out(out_dir + "/ranking.txt", std::ios::trunc);
    out << render_ranking_text(ranking, groups);
  }
  std::cout << render_ranking_text(ranking, groups);

  const Index n_strategies = table.strategies.size();
  const Index n_datasets = table.datasets.size();
  std::cout << "totals: win+tie+loss = (" << n_strategies << "-1) x "
            << n_datasets << " = " << (n_strategies - 1) * n_datasets
            << " per strategy and metric when the grid is complete\n";

  if (bso_records.empty()) {
    std::cout << "warning: no BSO results found; difficulty table skipped\n";
  } else {
    ExperimentResult tmp;
    tmp.records = bso_records;
    auto bso_means = bso_difficulty_inputs(tmp);
    std::set<std::string> covered;
    for (const auto& b : bso_means) covered.insert(b.dataset);
    bool complete = true;
    for (const auto& ds : table.datasets)
      if (!covered.count(ds)) complete = false;
    if (!complete) {
      std::cout << "warning: BSO results do not cover every dataset; "
                   "difficulty table skipped\n";
    } else {
      auto difficulty = difficulty_table(table, bso_means);
      {
        std::ofstream out(out_dir + "/difficulty.csv", std::ios::trunc);
        out << render_difficulty_csv(difficulty);
      }
      {
        std::ofstream out(out_dir + "/difficulty.txt", std::ios::trunc);
        out << render_difficulty_text(difficulty);
      }
      std::cout << render_difficulty_text(difficulty);
    }
  }
  for (const auto& w : warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

int cmd_plot(const PlotArgs& args) {
  const std::string curves_path = args.results_dir + "/curves.csv";
  if (!fs::exists(curves_path)) {
    std::cerr << "error: no curves.csv under " << args.results_dir << "\n";
    return 2;
  }
  std::vector<CurveRow> curves;
  try {
    curves = read_curves_csv(curves_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  bool known = false;
  for (const auto& row : curves)
    if (row.dataset == args.dataset) known = true;
  if (!known) {
    std::cerr << "error: unknown dataset '" << args.dataset << "'\n";
    return 2;
  }

  const std::string out_dir =
      args.out_dir.empty() ? args.results_dir : args.out_dir;
  fs::create_directories(out_dir);
  for (MetricKind m : {MetricKind::Acc, MetricKind::Auc, MetricKind::F1}) {
    std::string path =
        out_dir + "/curve_" + args.dataset + "_" + metric_name(m) + ".svg";
    std::ofstream out(path, std::ios::trunc);
    out << render_curve_svg(curves, args.dataset, m);
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_gen_data(const GenDataArgs& args) {
  fs::create_directories(args.out_dir);
  auto dump = [&](const Dataset& ds) {
    std::string path = args.out_dir + "/" + ds.name + ".csv";
    std::ofstream out(path, std::ios::trunc);
    for (Index i = 0; i < ds.n(); ++i) {
      for (Index j = 0; j < ds.d(); ++j)
        out << format_double(ds.features(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j)))
            << ',';
      out << ds.labels[i] << '\n';
    }
    std::cout << "wrote " << path << "\n";
  };
  dump(generate_gaussian_clouds(true, 1000,
                                derive_seed(args.seed, "gcloudb", 0, "dataset-gen")));
  dump(generate_gaussian_clouds(false, 1000,
                                derive_seed(args.seed, "gcloudub", 0, "dataset-gen")));
  dump(generate_xor_checkerboard(
      1600, derive_seed(args.seed, "checkerboard", 0, "dataset-gen")));

  nlohmann::json registry = nlohmann::json::array();
  for (const char* name : {"gcloudb", "gcloudub", "checkerboard"}) {
    nlohmann::json e;
    e["name"] = name;
    e["kind"] = "csv";
    e["path"] = std::string(name) + ".csv";
    registry.push_back(e);
  }
  std::ofstream out(args.out_dir + "/registry.json", std::ios::trunc);
  out << registry.dump(2) << "\n";
  std::cout << "wrote " << args.out_dir << "/registry.json\n";
  return 0;
}

}  // namespace albench
