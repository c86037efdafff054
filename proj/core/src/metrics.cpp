#include "albench/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace albench {

void BudgetCurve::validate() const {
  if (points.size() < 2) throw MetricError("budget curve needs >= 2 points");
  for (Index i = 0; i < points.size(); ++i) {
    if (i > 0 && points[i].first <= points[i - 1].first)
      throw MetricError("budget curve x-values must be strictly increasing");
    double v = points[i].second;
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw MetricError("budget curve values must be finite in [0, 1]");
  }
}

double accuracy(const Labels& y_true, const Labels& y_pred) {
  if (y_true.size() != y_pred.size() || y_true.empty())
    throw MetricError("accuracy: label vectors must have equal nonzero length");
  Index correct = 0;
  for (Index i = 0; i < y_true.size(); ++i)
    if (y_true[i] == y_pred[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(y_true.size());
}

namespace {

// Rank-statistic AUC for one score column with class `positive`.
double binary_auc(const Labels& y_true, const Matrix& proba, int positive,
                  Eigen::Index col, bool& defined) {
  Index n = y_true.size();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return proba(static_cast<Eigen::Index>(a), col) <
           proba(static_cast<Eigen::Index>(b), col);
  });

  // Midranks over tied score groups.
  std::vector<double> rank(n);
  Index i = 0;
  while (i < n) {
    Index j = i;
    while (j + 1 < n &&
           proba(static_cast<Eigen::Index>(order[j + 1]), col) ==
               proba(static_cast<Eigen::Index>(order[i]), col))
      ++j;
    double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Index k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }

  double pos = 0, neg = 0, rank_sum = 0;
  for (Index k = 0; k < n; ++k) {
    if (y_true[k] == positive) {
      pos += 1;
      rank_sum += rank[k];
    } else {
      neg += 1;
    }
  }
  if (pos == 0 || neg == 0) {
    defined = false;
    return 0.0;
  }
  defined = true;
  return (rank_sum - pos * (pos + 1) / 2.0) / (pos * neg);
}

}  // namespace

double auc(const Labels& y_true, const Matrix& proba) {
  if (static_cast<Eigen::Index>(y_true.size()) != proba.rows() || y_true.empty())
    throw MetricError("auc: rows of proba must match y_true length");
  const int k = static_cast<int>(proba.cols());
  if (k < 2) throw MetricError("auc: proba needs >= 2 columns");

  if (k == 2) {
    bool defined;
    double v = binary_auc(y_true, proba, 1, 1, defined);
    if (!defined) throw MetricError("auc: only one class present in y_true");
    return v;
  }

  double sum = 0;
  int counted = 0;
  for (int c = 0; c < k; ++c) {
    bool present = false;
    for (int y : y_true)
      if (y == c) {
        present = true;
        break;
      }
    if (!present) continue;
    bool defined;
    double v = binary_auc(y_true, proba, c, c, defined);
    if (!defined) continue;  // class covers the whole fold, nothing to rank
    sum += v;
    ++counted;
  }
  if (counted == 0) throw MetricError("auc: no class has both positives and negatives");
  return sum / counted;
}

namespace {

double f1_for_class(const Labels& y_true, const Labels& y_pred, int cls) {
  double tp = 0, fp = 0, fn = 0;
  for (Index i = 0; i < y_true.size(); ++i) {
    bool t = y_true[i] == cls;
    bool p = y_pred[i] == cls;
    if (t && p) tp += 1;
    if (!t && p) fp += 1;
    if (t && !p) fn += 1;
  }
  if (tp == 0 && fp == 0 && fn == 0) return 0.0;  // no positives by convention
  if (tp == 0) return 0.0;
  double precision = tp / (tp + fp);
  double recall = tp / (tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

double f1(const Labels& y_true, const Labels& y_pred, int k_classes) {
  if (y_true.size() != y_pred.size() || y_true.empty())
    throw MetricError("f1: label vectors must have equal nonzero length");
  int k = k_classes;
  if (k == 0) {
    for (int y : y_true) k = std::max(k, y + 1);
    for (int y : y_pred) k = std::max(k, y + 1);
  }
  if (k <= 2) return f1_for_class(y_true, y_pred, 1);

  double sum = 0;
  int counted = 0;
  for (int c = 0; c < k; ++c) {
    bool present = false;
    for (int y : y_true)
      if (y == c) {
        present = true;
        break;
      }
    if (!present) continue;
    sum += f1_for_class(y_true, y_pred, c);
    ++counted;
  }
  return counted ? sum / counted : 0.0;
}

double aubc(const BudgetCurve& curve) {
  curve.validate();
  const auto& pts = curve.points;
  double span = static_cast<double>(pts.back().first - pts.front().first);
  double area = 0;
  for (Index i = 0; i + 1 < pts.size(); ++i) {
    double dx = static_cast<double>(pts[i + 1].first - pts[i].first);
    area += dx * 0.5 * (pts[i].second + pts[i + 1].second);
  }
  return area / span;
}

}  // namespace albench
