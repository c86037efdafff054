#pragma once

#include <string>
#include <vector>

#include "albench/common.hpp"

namespace albench {

enum class MetricKind { Acc, Auc, F1 };

inline const char* metric_name(MetricKind m) {
  switch (m) {
    case MetricKind::Acc: return "acc";
    case MetricKind::Auc: return "auc";
    default: return "f1";
  }
}

struct BudgetCurve {
  MetricKind kind = MetricKind::Acc;
  std::vector<std::pair<Index, double>> points;  // (num_labeled, value)

  void validate() const;
};

double accuracy(const Labels& y_true, const Labels& y_pred);

// Binary: Mann-Whitney rank AUC of the class-1 probability column, ties count
// one half. Multi-class: one-vs-rest AUC macro-averaged over the classes
// present in y_true. Throws MetricError when no class has both a positive and
// a negative sample to rank.
double auc(const Labels& y_true, const Matrix& proba);

// Binary: F1 of class 1 (0 when there are neither predicted nor true
// positives). Multi-class: macro-F1 over classes present in y_true.
// k_classes = 0 infers the class count from the labels.
double f1(const Labels& y_true, const Labels& y_pred, int k_classes = 0);

// Normalized trapezoid area: a constant curve maps to its constant.
double aubc(const BudgetCurve& curve);

}  // namespace albench
