#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "albench/common.hpp"

namespace albench {

enum class Origin { Real, Synthetic };

struct Dataset {
  std::string name;
  Matrix features;  // n x d
  Labels labels;    // values in [0, k_classes)
  int k_classes = 0;
  Origin origin = Origin::Real;

  Index n() const { return static_cast<Index>(features.rows()); }
  Index d() const { return static_cast<Index>(features.cols()); }

  void validate() const;  // throws LoadError when an invariant is broken
};

// Table-style property tags; thresholds d<50, n<1000, K=2.
struct DatasetTags {
  bool binary = false;      // B vs M
  bool low_dim = false;     // LD vs HD
  bool small_scale = false; // SC vs LC
  bool real = false;        // R vs S

  std::string to_string() const;
};

struct SplitSpec {
  std::uint64_t trial_seed = 0;
  double train_fraction = 0.6;
  Index n_initial = 20;
};

struct TrialSplit {
  IndexList train_idx;            // sorted
  IndexList test_idx;             // sorted
  IndexList initial_labeled_idx;  // sorted, subset of train_idx

  std::uint64_t hash() const;
};

struct CsvSchema {
  // Column holding the label; negative means "last column".
  int label_col = -1;
  // Header handling: auto-detects when unset.
  std::optional<bool> has_header;
};

struct LoadReport {
  std::vector<std::pair<std::string, int>> label_mapping;  // original -> id
  Index n = 0;
  Index d = 0;
  int k = 0;
  std::vector<std::string> warnings;
};

Dataset load_csv(const std::string& path, const CsvSchema& schema = {},
                 LoadReport* report = nullptr);

Dataset generate_gaussian_clouds(bool balanced, Index n, std::uint64_t seed);
Dataset generate_xor_checkerboard(Index n, std::uint64_t seed);

TrialSplit make_split(const Dataset& ds, const SplitSpec& spec);

DatasetTags derive_tags(const Dataset& ds);

// Registry file: JSON array of entries with either a csv path or a generator.
struct RegistryEntry {
  std::string name;
  std::string kind;  // "csv" | "gcloud_balanced" | "gcloud_unbalanced" | "checkerboard"
  std::string path;  // csv only
  int label_col = -1;
  Index n = 0;       // generator size override; 0 = generator default
};

std::vector<RegistryEntry> load_registry(const std::string& path);

// Resolves a dataset by name: registry entry if present, otherwise one of the
// built-in generator names. Generator seeds derive from `master_seed` so a run
// is reproducible from its manifest alone.
Dataset resolve_dataset(const std::string& name,
                        const std::vector<RegistryEntry>& registry,
                        const std::string& data_dir, std::uint64_t master_seed,
                        int default_label_col = -1);

}  // namespace albench
