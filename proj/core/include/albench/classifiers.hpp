#pragma once

#include <string>
#include <variant>
#include <vector>

#include "albench/common.hpp"

namespace albench {

enum class ClassifierKind { Logreg, SvmLinear, SvmRbf, KernelLogreg, Gpc };

std::string classifier_kind_name(ClassifierKind k);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Logreg;
  double c = 1.0;          // inverse regularization strength / SVM cost
  double rbf_gamma = 0.0;  // <= 0 means `scale` = 1/(d * Var(X))
  int max_iter = 200;
  double tol = 1e-8;

  void validate() const;
};

struct LogregParams {
  // (K-1) x (d+1) block, bias in the last column; class K-1 is the reference.
  Matrix coef;
};

struct SvmMachine {
  Matrix support;              // rows used by the decision function
  Vector dual_coef;            // alpha_i * y_i per support row
  double bias = 0.0;
  // Platt sigmoid p = 1 / (1 + exp(a * f + b)); `calibrated` false means the
  // parameter-free fallback sigmoid(2 f) is in effect.
  double platt_a = -2.0;
  double platt_b = 0.0;
  bool calibrated = false;
};

struct SvmParams {
  bool rbf = false;
  double gamma = 1.0;
  std::vector<SvmMachine> machines;  // one for binary, else one per class
};

struct KernelLogregParams {
  Matrix landmarks;  // r x d
  double gamma = 1.0;
  Matrix feature_map;  // r x rank, phi(x) = k(x, landmarks) * feature_map
  Matrix coef;         // logreg block over the mapped features
};

struct GpcMachine {
  Vector grad;    // t - pi at the Laplace mode
  Vector sqrt_w;
  Matrix chol;    // lower factor of I + sqrtW K sqrtW
};

struct GpcParams {
  Matrix train;  // m x d
  double gamma = 1.0;
  std::vector<GpcMachine> machines;
};

struct TrainedModel {
  ClassifierSpec spec;
  int classes = 0;
  Index dim = 0;
  std::variant<LogregParams, SvmParams, KernelLogregParams, GpcParams> params;
};

// Trains the classifier named by `spec`. Deterministic given (spec, X, y).
TrainedModel fit(const ClassifierSpec& spec, const Matrix& x, const Labels& y);

// Row-stochastic class probabilities.
Matrix predict_proba(const TrainedModel& model, const Matrix& x);

// argmax of predict_proba, ties resolved to the lowest class index.
Labels predict(const TrainedModel& model, const Matrix& x);

// SVMs: signed margins, one column for binary (class-1 positive) and one per
// class otherwise. Logreg family: raw logits.
Matrix decision_values(const TrainedModel& model, const Matrix& x);

Labels argmax_rows(const Matrix& proba);

// QBC committee members; `use_gpc` swaps the Nystrom kernel-logreg member for
// a Laplace Gaussian-process classifier.
std::vector<ClassifierSpec> committee_specs(bool use_gpc = false);

// Regularized multinomial logistic loss and gradient at `coef`, exposed so
// tests can check the solver against finite differences.
double logreg_loss(const Matrix& coef, const Matrix& x, const Labels& y,
                   int k_classes, double c);
Matrix logreg_gradient(const Matrix& coef, const Matrix& x, const Labels& y,
                       int k_classes, double c);

}  // namespace albench
