#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "albench/classifiers.hpp"
#include "albench/common.hpp"
#include "albench/datasets.hpp"
#include "albench/strategies.hpp"

namespace testutil {

using namespace albench;

inline std::string write_temp_file(const std::string& name,
                                   const std::string& content) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "albench_tests";
  fs::create_directories(dir);
  fs::path path = dir / name;
  std::ofstream out(path, std::ios::trunc);
  out << content;
  return path.string();
}

inline std::string fresh_dir(const std::string& name) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "albench_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Simple deterministic dataset: two d-dimensional blobs around +-center.
inline Dataset make_blobs(Index n, double center, double spread,
                          std::uint64_t seed, const std::string& name = "blobs") {
  Dataset ds;
  ds.name = name;
  ds.features.resize(static_cast<Eigen::Index>(n), 2);
  ds.labels.resize(n);
  ds.k_classes = 2;
  ds.origin = Origin::Synthetic;
  Rng rng(seed);
  for (Index i = 0; i < n; ++i) {
    int cls = static_cast<int>(i % 2);
    double cx = cls == 0 ? -center : center;
    ds.features(static_cast<Eigen::Index>(i), 0) = cx + spread * rng.normal();
    ds.features(static_cast<Eigen::Index>(i), 1) = spread * rng.normal();
    ds.labels[i] = cls;
  }
  return ds;
}

// Exhaustive k-center oracle: best max-min covering radius over every
// candidate subset of size s (centers also include the labeled points).
inline double kcenter_optimal_radius(const Matrix& pool, const IndexList& labeled,
                                     const IndexList& candidates, Index s) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Index> pick(s);
  std::function<void(Index, Index)> rec = [&](Index start, Index depth) {
    if (depth == s) {
      double radius = 0;
      for (Eigen::Index i = 0; i < pool.rows(); ++i) {
        double dmin = std::numeric_limits<double>::infinity();
        for (Index l : labeled)
          dmin = std::min(dmin, (pool.row(i) -
                                 pool.row(static_cast<Eigen::Index>(l)))
                                    .squaredNorm());
        for (Index c : pick)
          dmin = std::min(dmin, (pool.row(i) -
                                 pool.row(static_cast<Eigen::Index>(c)))
                                    .squaredNorm());
        radius = std::max(radius, dmin);
      }
      best = std::min(best, radius);
      return;
    }
    for (Index i = start; i < candidates.size(); ++i) {
      pick[depth] = candidates[i];
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return std::sqrt(best);
}

// Covering radius of a concrete center choice.
inline double kcenter_radius(const Matrix& pool, const IndexList& labeled,
                             const IndexList& centers) {
  double radius = 0;
  for (Eigen::Index i = 0; i < pool.rows(); ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (Index l : labeled)
      dmin = std::min(
          dmin, (pool.row(i) - pool.row(static_cast<Eigen::Index>(l))).squaredNorm());
    for (Index c : centers)
      dmin = std::min(
          dmin, (pool.row(i) - pool.row(static_cast<Eigen::Index>(c))).squaredNorm());
    radius = std::max(radius, dmin);
  }
  return std::sqrt(radius);
}

// KKT audit for the plain C-SVC dual: every training point must satisfy its
// box condition on y_i f(x_i) within the slack.
inline bool svm_kkt_ok(const Matrix& gram, const std::vector<double>& y,
                       const std::vector<double>& alpha, double c, double bias,
                       double slack) {
  const Index m = y.size();
  for (Index i = 0; i < m; ++i) {
    double f = bias;
    for (Index j = 0; j < m; ++j)
      f += alpha[j] * y[j] * gram(static_cast<Eigen::Index>(j),
                                  static_cast<Eigen::Index>(i));
    double margin = y[i] * f;
    if (alpha[i] <= 1e-9) {
      if (margin < 1.0 - slack) return false;
    } else if (alpha[i] >= c - 1e-9) {
      if (margin > 1.0 + slack) return false;
    } else {
      if (std::abs(margin - 1.0) > slack) return false;
    }
  }
  return true;
}

// Box-constrained dual solve by projected gradient: an SMO-independent route
// for small problems.
inline std::vector<double> svm_dual_projected_gradient(const Matrix& gram,
                                                       const std::vector<double>& y,
                                                       double c, int iters = 200000,
                                                       double lr = 1e-3) {
  const Index m = y.size();
  std::vector<double> alpha(m, 0.0);
  for (int it = 0; it < iters; ++it) {
    // gradient of 1/2 a^T Q a - 1^T a
    std::vector<double> grad(m, -1.0);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j)
        grad[i] += y[i] * y[j] *
                   gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                   alpha[j];
    for (Index i = 0; i < m; ++i)
      alpha[i] = std::clamp(alpha[i] - lr * grad[i], 0.0, c);
    // project onto y^T a = 0
    double viol = 0;
    for (Index i = 0; i < m; ++i) viol += y[i] * alpha[i];
    for (Index i = 0; i < m; ++i)
      alpha[i] = std::clamp(alpha[i] - viol * y[i] / static_cast<double>(m), 0.0, c);
  }
  return alpha;
}

inline QueryContext make_context(const PoolView& pool, const IndexList& labeled,
                                 const IndexList& unlabeled, Index batch,
                                 std::uint64_t seed = 1, Index step = 0,
                                 Index budget = 100) {
  QueryContext ctx;
  ctx.pool = &pool;
  ctx.labeled_idx = labeled;
  ctx.unlabeled_idx = unlabeled;
  ctx.batch_size = batch;
  ctx.step = step;
  ctx.budget = budget;
  ctx.strategy_seed = seed;
  return ctx;
}

}  // namespace testutil
