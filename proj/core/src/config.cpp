#include "albench/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace albench {

namespace {

std::string trim(const std::string& s) {
  Index b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      std::string t = trim(cur);
      if (!t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  std::string t = trim(cur);
  if (!t.empty()) out.push_back(t);
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

ClassifierKind parse_evaluator(const std::string& origin, int line,
                               const std::string& value) {
  if (value == "logreg") return ClassifierKind::Logreg;
  if (value == "svm_linear") return ClassifierKind::SvmLinear;
  if (value == "svm_rbf") return ClassifierKind::SvmRbf;
  fail(origin, line, "unknown evaluator '" + value +
                         "' (expected logreg, svm_linear or svm_rbf)");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  ExperimentConfig cfg;
  cfg.evaluator.kind = ClassifierKind::SvmRbf;

  std::istringstream in(text);
  std::string raw;
  std::string section = "experiment";
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "experiment" && section != "bso")
        fail(origin, line_no, "unknown section [" + section + "]");
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin, line_no, "expected key = value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(origin, line_no, "empty key or value");

    auto as_u64 = [&]() -> std::uint64_t {
      try {
        return std::stoull(value);
      } catch (...) {
        fail(origin, line_no, "expected an integer for " + key);
      }
    };
    auto as_double = [&]() -> double {
      try {
        return std::stod(value);
      } catch (...) {
        fail(origin, line_no, "expected a number for " + key);
      }
    };

    if (section == "experiment") {
      if (key == "datasets") {
        cfg.datasets = split_list(value);
      } else if (key == "strategies") {
        cfg.strategies.clear();
        for (const auto& id : split_list(value)) {
          try {
            cfg.strategies.push_back(StrategyId::parse(id));
          } catch (const StrategyError& e) {
            fail(origin, line_no, e.what());
          }
        }
      } else if (key == "n_trials") {
        cfg.n_trials = static_cast<int>(as_u64());
      } else if (key == "budget") {
        if (value == "full") {
          cfg.budget_policy = BudgetPolicy::FullPool;
        } else {
          cfg.budget_policy = BudgetPolicy::Fixed;
          cfg.fixed_budget = static_cast<Index>(as_u64());
        }
      } else if (key == "evaluator") {
        cfg.evaluator.kind = parse_evaluator(origin, line_no, value);
      } else if (key == "evaluator_c") {
        cfg.evaluator.c = as_double();
      } else if (key == "evaluator_gamma") {
        cfg.evaluator.rbf_gamma = value == "scale" ? 0.0 : as_double();
      } else if (key == "master_seed") {
        cfg.master_seed = as_u64();
      } else if (key == "eval_every") {
        cfg.eval_every = static_cast<Index>(as_u64());
      } else if (key == "train_fraction") {
        cfg.train_fraction = as_double();
      } else if (key == "n_initial") {
        cfg.n_initial = static_cast<Index>(as_u64());
      } else if (key == "label_col") {
        cfg.default_label_col = static_cast<int>(as_u64());
      } else if (key == "data_dir") {
        cfg.data_dir = value;
      } else if (key == "registry") {
        cfg.registry_path = value;
      } else {
        fail(origin, line_no, "unknown key '" + key + "' in [experiment]");
      }
    } else {  // [bso]
      if (key == "width") {
        cfg.bso_width = static_cast<Index>(as_u64());
      } else if (key == "budget") {
        cfg.bso_budget = value == "full" ? 0 : static_cast<Index>(as_u64());
      } else if (key == "candidate_subsample") {
        cfg.bso_candidate_cap = value == "all" ? 0 : static_cast<Index>(as_u64());
      } else {
        fail(origin, line_no, "unknown key '" + key + "' in [bso]");
      }
    }
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string config_to_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[experiment]\n";
  os << "datasets = ";
  for (Index i = 0; i < cfg.datasets.size(); ++i)
    os << (i ? ", " : "") << cfg.datasets[i];
  os << "\nstrategies = ";
  for (Index i = 0; i < cfg.strategies.size(); ++i)
    os << (i ? ", " : "") << cfg.strategies[i].to_string();
  os << "\nn_trials = " << cfg.n_trials << "\n";
  if (cfg.budget_policy == BudgetPolicy::FullPool)
    os << "budget = full\n";
  else
    os << "budget = " << cfg.fixed_budget << "\n";
  os << "evaluator = " << classifier_kind_name(cfg.evaluator.kind) << "\n";
  os << "evaluator_c = " << format_double(cfg.evaluator.c) << "\n";
  if (cfg.evaluator.rbf_gamma > 0)
    os << "evaluator_gamma = " << format_double(cfg.evaluator.rbf_gamma) << "\n";
  else
    os << "evaluator_gamma = scale\n";
  os << "master_seed = " << cfg.master_seed << "\n";
  os << "eval_every = " << cfg.eval_every << "\n";
  os << "train_fraction = " << format_double(cfg.train_fraction) << "\n";
  os << "n_initial = " << cfg.n_initial << "\n";
  if (!cfg.data_dir.empty()) os << "data_dir = " << cfg.data_dir << "\n";
  if (!cfg.registry_path.empty()) os << "registry = " << cfg.registry_path << "\n";
  os << "\n[bso]\n";
  os << "width = " << cfg.bso_width << "\n";
  if (cfg.bso_budget == 0)
    os << "budget = full\n";
  else
    os << "budget = " << cfg.bso_budget << "\n";
  if (cfg.bso_candidate_cap == 0)
    os << "candidate_subsample = all\n";
  else
    os << "candidate_subsample = " << cfg.bso_candidate_cap << "\n";
  return os.str();
}

}  // namespace albench
