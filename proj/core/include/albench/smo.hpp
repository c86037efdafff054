#pragma once

#include "albench/common.hpp"

namespace albench {

// Dual problem in libsvm form:
//   min 1/2 a^T Q a + p^T a,  Q_ij = y_i y_j K_ij
//   s.t. y^T a = 0, 0 <= a_i <= c_i
// Plain C-SVC uses p = -1 everywhere; the hinted variant feeds other p/c.
struct SmoProblem {
  const Matrix* gram = nullptr;  // m x m kernel values K_ij
  std::vector<double> y;         // +-1
  std::vector<double> c;
  std::vector<double> p;
  double tol = 1e-3;
  long max_steps = 0;  // 0 = heuristic cap
};

struct SmoResult {
  std::vector<double> alpha;
  double bias = 0.0;      // decision f(x) = sum_i alpha_i y_i K(x_i, x) + bias
  double kkt_gap = 0.0;   // final maximal-violating-pair gap
  long steps = 0;
};

SmoResult solve_smo(const SmoProblem& prob);

}  // namespace albench
