#include "albench/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace albench {

namespace {

bool parse_number(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end != begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  if (begin == end) return false;
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string> split_line(const std::string& line) {
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
  return cells;
}

std::string trim(const std::string& s) {
  Index b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

void Dataset::validate() const {
  if (features.rows() != static_cast<Eigen::Index>(labels.size()))
    throw LoadError("dataset '" + name + "': feature rows != label count");
  if (k_classes < 2) throw LoadError("dataset '" + name + "': needs >= 2 classes");
  if (n() < 40)
    throw LoadError("dataset '" + name + "': needs n >= 40, got " +
                    std::to_string(n()));
  if (!features.allFinite())
    throw LoadError("dataset '" + name + "': non-finite feature value");
  std::vector<Index> counts(static_cast<Index>(k_classes), 0);
  for (int y : labels) {
    if (y < 0 || y >= k_classes)
      throw LoadError("dataset '" + name + "': label out of range");
    counts[static_cast<Index>(y)]++;
  }
  for (int c = 0; c < k_classes; ++c)
    if (counts[static_cast<Index>(c)] == 0)
      throw LoadError("dataset '" + name + "': class " + std::to_string(c) +
                      " has no samples");
}

std::string DatasetTags::to_string() const {
  std::string s;
  s += real ? "R" : "S";
  s += "+";
  s += binary ? "B" : "M";
  s += "+";
  s += low_dim ? "LD" : "HD";
  s += "+";
  s += small_scale ? "SC" : "LC";
  return s;
}

std::uint64_t TrialSplit::hash() const {
  std::uint64_t h = fnv1a64("trial-split");
  auto fold = [&h](const IndexList& v) {
    h = hash_mix(h, v.size());
    for (Index i : v) h = hash_mix(h, i);
  };
  fold(train_idx);
  fold(test_idx);
  fold(initial_labeled_idx);
  return h;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema,
                 LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open csv file: " + path);

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_line(line));
  }
  if (rows.empty()) throw LoadError(path + ": file has no data rows");

  const Index ncols = rows[0].size();
  if (ncols < 2) throw LoadError(path + ": need at least one feature column plus a label");
  for (Index r = 0; r < rows.size(); ++r)
    if (rows[r].size() != ncols)
      throw LoadError(path + ": row " + std::to_string(r + 1) +
                      " has " + std::to_string(rows[r].size()) +
                      " cells, expected " + std::to_string(ncols));

  Index label_col = schema.label_col < 0 ? ncols - 1
                                         : static_cast<Index>(schema.label_col);
  if (label_col >= ncols)
    throw LoadError(path + ": label column " + std::to_string(label_col) +
                    " out of range (columns: " + std::to_string(ncols) + ")");

  // Header detection: any non-numeric feature cell in the first row.
  bool header;
  if (schema.has_header.has_value()) {
    header = *schema.has_header;
  } else {
    header = false;
    double tmp;
    for (Index c = 0; c < ncols; ++c) {
      if (c == label_col) continue;
      if (!parse_number(rows[0][c], tmp)) {
        header = true;
        break;
      }
    }
  }
  Index first = header ? 1 : 0;
  Index n = rows.size() - first;
  if (n == 0) throw LoadError(path + ": file has no data rows below the header");

  Matrix X(n, ncols - 1);
  std::vector<std::string> raw_labels(n);
  for (Index r = 0; r < n; ++r) {
    const auto& cells = rows[r + first];
    Index fc = 0;
    for (Index c = 0; c < ncols; ++c) {
      if (c == label_col) {
        raw_labels[r] = trim(cells[c]);
        continue;
      }
      double v;
      if (!parse_number(cells[c], v))
        throw LoadError(path + ": row " + std::to_string(r + first + 1) +
                        ", column " + std::to_string(c + 1) +
                        ": non-numeric feature '" + cells[c] + "'");
      if (!std::isfinite(v))
        throw LoadError(path + ": row " + std::to_string(r + first + 1) +
                        ", column " + std::to_string(c + 1) +
                        ": non-finite feature value");
      X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(fc++)) = v;
    }
  }

  // Stable mapping: sorted original label values -> 0..K-1. Numeric sort when
  // every label parses as a number, lexicographic otherwise.
  std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
  std::vector<std::string> ordered(distinct.begin(), distinct.end());
  bool all_numeric = true;
  for (const auto& s : ordered) {
    double tmp;
    if (!parse_number(s, tmp)) {
      all_numeric = false;
      break;
    }
  }
  if (all_numeric) {
    std::sort(ordered.begin(), ordered.end(),
              [](const std::string& a, const std::string& b) {
                double x, y;
                parse_number(a, x);
                parse_number(b, y);
                if (x != y) return x < y;
                return a < b;
              });
  }
  if (ordered.size() < 2) throw LoadError(path + ": only one class present");

  std::map<std::string, int> mapping;
  for (Index i = 0; i < ordered.size(); ++i)
    mapping[ordered[i]] = static_cast<int>(i);

  Dataset ds;
  ds.name = path;
  auto slash = path.find_last_of('/');
  if (slash != std::string::npos) ds.name = path.substr(slash + 1);
  auto dot = ds.name.find_last_of('.');
  if (dot != std::string::npos) ds.name = ds.name.substr(0, dot);
  ds.features = std::move(X);
  ds.labels.resize(n);
  for (Index r = 0; r < n; ++r) ds.labels[r] = mapping[raw_labels[r]];
  ds.k_classes = static_cast<int>(ordered.size());
  ds.origin = Origin::Real;
  ds.validate();

  if (report) {
    report->label_mapping.clear();
    for (const auto& s : ordered)
      report->label_mapping.emplace_back(s, mapping[s]);
    report->n = ds.n();
    report->d = ds.d();
    report->k = ds.k_classes;
  }
  return ds;
}

Dataset generate_gaussian_clouds(bool balanced, Index n, std::uint64_t seed) {
  if (n < 40)
    throw std::invalid_argument("generate_gaussian_clouds: n must be >= 40");
  // Exact stratified counts so the priors hold for every n. The unbalanced
  // variant pulls the means together; with the tight minority at +-1.5 the
  // classes barely overlap and the task saturates immediately.
  double prior0 = balanced ? 0.5 : 0.8;
  Index n0 = static_cast<Index>(std::llround(prior0 * static_cast<double>(n)));
  double mean_x = balanced ? 1.5 : 1.25;
  double sd0 = 1.0;
  double sd1 = balanced ? 1.0 : 0.5;

  Dataset ds;
  ds.name = balanced ? "gcloudb" : "gcloudub";
  ds.features.resize(static_cast<Eigen::Index>(n), 2);
  ds.labels.resize(n);
  ds.k_classes = 2;
  ds.origin = Origin::Synthetic;

  Rng rng(seed);
  // Row order must not encode the class, so draw the block layout and then
  // permute with the same stream.
  IndexList perm(n);
  for (Index i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);
  for (Index i = 0; i < n; ++i) {
    bool cls1 = perm[i] >= n0;
    double mx = cls1 ? mean_x : -mean_x;
    double sd = cls1 ? sd1 : sd0;
    ds.features(static_cast<Eigen::Index>(i), 0) = mx + sd * rng.normal();
    ds.features(static_cast<Eigen::Index>(i), 1) = sd * rng.normal();
    ds.labels[i] = cls1 ? 1 : 0;
  }
  ds.validate();
  return ds;
}

Dataset generate_xor_checkerboard(Index n, std::uint64_t seed) {
  if (n < 40)
    throw std::invalid_argument("generate_xor_checkerboard: n must be >= 40");
  Dataset ds;
  ds.name = "checkerboard";
  ds.features.resize(static_cast<Eigen::Index>(n), 2);
  ds.labels.resize(n);
  ds.k_classes = 2;
  ds.origin = Origin::Synthetic;

  Rng rng(seed);
  for (Index i = 0; i < n; ++i) {
    double x1 = 2.0 * rng.uniform();
    double x2 = 2.0 * rng.uniform();
    ds.features(static_cast<Eigen::Index>(i), 0) = x1;
    ds.features(static_cast<Eigen::Index>(i), 1) = x2;
    ds.labels[i] = static_cast<int>(std::floor(x1) + std::floor(x2)) % 2;
  }
  ds.validate();
  return ds;
}

TrialSplit make_split(const Dataset& ds, const SplitSpec& spec) {
  ds.validate();
  if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
    throw SplitError("train_fraction must be in (0, 1)");
  if (spec.n_initial < 2) throw SplitError("n_initial must be >= 2");

  const Index n = ds.n();
  const Index n_train =
      static_cast<Index>(std::ceil(spec.train_fraction * static_cast<double>(n)));
  if (spec.n_initial > n_train)
    throw SplitError("n_initial exceeds the train partition size");

  Rng rng(spec.trial_seed);
  IndexList perm(n);
  for (Index i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);

  TrialSplit split;
  split.train_idx.assign(perm.begin(), perm.begin() + static_cast<long>(n_train));
  split.test_idx.assign(perm.begin() + static_cast<long>(n_train), perm.end());
  std::sort(split.train_idx.begin(), split.train_idx.end());
  std::sort(split.test_idx.begin(), split.test_idx.end());

  constexpr int kMaxRedraws = 100;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    IndexList picked =
        rng.sample_without_replacement(split.train_idx, spec.n_initial);
    std::set<int> classes;
    for (Index i : picked) classes.insert(ds.labels[i]);
    if (classes.size() >= 2) {
      std::sort(picked.begin(), picked.end());
      split.initial_labeled_idx = std::move(picked);
      return split;
    }
  }
  throw SplitError("dataset '" + ds.name +
                   "': could not draw an initial pool with >= 2 classes");
}

DatasetTags derive_tags(const Dataset& ds) {
  DatasetTags tags;
  tags.binary = ds.k_classes == 2;
  tags.low_dim = ds.d() < 50;
  tags.small_scale = ds.n() < 1000;
  tags.real = ds.origin == Origin::Real;
  return tags;
}

std::vector<RegistryEntry> load_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open registry file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw LoadError("registry " + path + ": " + e.what());
  }
  if (!j.is_array()) throw LoadError("registry " + path + ": expected a JSON array");
  std::vector<RegistryEntry> entries;
  for (const auto& item : j) {
    RegistryEntry e;
    e.name = item.at("name").get<std::string>();
    e.kind = item.value("kind", std::string("csv"));
    e.path = item.value("path", std::string());
    e.label_col = item.value("label_col", -1);
    e.n = item.value("n", Index{0});
    entries.push_back(std::move(e));
  }
  return entries;
}

namespace {

Dataset generate_by_kind(const std::string& name, const std::string& kind,
                         Index n, std::uint64_t master_seed) {
  std::uint64_t seed = derive_seed(master_seed, name, 0, "dataset-gen");
  if (kind == "gcloud_balanced")
    return generate_gaussian_clouds(true, n ? n : 1000, seed);
  if (kind == "gcloud_unbalanced")
    return generate_gaussian_clouds(false, n ? n : 1000, seed);
  if (kind == "checkerboard") return generate_xor_checkerboard(n ? n : 1600, seed);
  throw LoadError("unknown generator kind '" + kind + "' for dataset " + name);
}

}  // namespace

Dataset resolve_dataset(const std::string& name,
                        const std::vector<RegistryEntry>& registry,
                        const std::string& data_dir, std::uint64_t master_seed,
                        int default_label_col) {
  for (const auto& e : registry) {
    if (e.name != name) continue;
    if (e.kind == "csv") {
      std::string path = e.path;
      if (!path.empty() && path.front() != '/' && !data_dir.empty())
        path = data_dir + "/" + path;
      CsvSchema schema;
      schema.label_col = e.label_col >= 0 ? e.label_col : default_label_col;
      Dataset ds = load_csv(path, schema);
      ds.name = e.name;
      return ds;
    }
    Dataset ds = generate_by_kind(e.name, e.kind, e.n, master_seed);
    ds.name = e.name;
    return ds;
  }
  // Built-in synthetic names work without a registry.
  if (name == "gcloudb") return generate_by_kind(name, "gcloud_balanced", 0, master_seed);
  if (name == "gcloudub") return generate_by_kind(name, "gcloud_unbalanced", 0, master_seed);
  if (name == "checkerboard" || name == "xor")
    return generate_by_kind(name, "checkerboard", 0, master_seed);
  // Fall back to a csv file named after the dataset in the data directory.
  std::string path = data_dir.empty() ? name + ".csv" : data_dir + "/" + name + ".csv";
  CsvSchema schema;
  schema.label_col = default_label_col;
  Dataset ds = load_csv(path, schema);
  ds.name = name;
  return ds;
}

}  // namespace albench
