#include "albench/smo.hpp"

#include <algorithm>
#include <limits>

namespace albench {

// Sequential minimal optimization with maximal-violating-pair working set
// selection. Gradient is kept incrementally; ties go to the lowest index so
// the result is deterministic.
SmoResult solve_smo(const SmoProblem& prob) {
  const Index m = prob.y.size();
  const Matrix& k = *prob.gram;
  if (static_cast<Index>(k.rows()) != m || prob.c.size() != m ||
      prob.p.size() != m)
    throw TrainError("smo: inconsistent problem dimensions");

  std::vector<double> alpha(m, 0.0);
  std::vector<double> grad(prob.p);  // G_i = (Q a)_i + p_i, a = 0 initially

  long max_steps = prob.max_steps > 0
                       ? prob.max_steps
                       : std::max<long>(10000000, static_cast<long>(m) * 2000);

  auto is_up = [&](Index t) {
    return (prob.y[t] > 0 && alpha[t] < prob.c[t]) ||
           (prob.y[t] < 0 && alpha[t] > 0);
  };
  auto is_low = [&](Index t) {
    return (prob.y[t] > 0 && alpha[t] > 0) ||
           (prob.y[t] < 0 && alpha[t] < prob.c[t]);
  };

  SmoResult res;
  res.kkt_gap = std::numeric_limits<double>::infinity();

  long step = 0;
  for (; step < max_steps; ++step) {
    // i maximizes -y G over the "up" set, j minimizes it over the "low" set.
    Index i = m, j = m;
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (Index t = 0; t < m; ++t) {
      double v = -prob.y[t] * grad[t];
      if (is_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (is_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    res.kkt_gap = gmax - gmin;
    if (i == m || j == m || res.kkt_gap <= prob.tol) break;

    const double yi = prob.y[i], yj = prob.y[j];
    const double qii = k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    const double qjj = k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
    const double qij = k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    double quad = qii + qjj - 2.0 * qij;
    if (quad <= 0) quad = 1e-12;

    // Unconstrained optimum along the feasible direction, then box clipping.
    double delta = (gmax - gmin) / quad;
    double old_ai = alpha[i], old_aj = alpha[j];
    double ai = old_ai + yi * delta;
    double aj = old_aj - yj * delta;

    double sum = yi * old_ai + yj * old_aj;
    ai = std::clamp(ai, 0.0, prob.c[i]);
    aj = yj * (sum - yi * ai);
    aj = std::clamp(aj, 0.0, prob.c[j]);
    ai = yi * (sum - yj * aj);
    ai = std::clamp(ai, 0.0, prob.c[i]);

    double dai = ai - old_ai, daj = aj - old_aj;
    if (std::abs(dai) < 1e-15 && std::abs(daj) < 1e-15) break;
    alpha[i] = ai;
    alpha[j] = aj;

    for (Index t = 0; t < m; ++t) {
      grad[t] += prob.y[t] *
                 (yi * dai * k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) +
                  yj * daj * k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)));
    }
  }
  res.steps = step;

  // Offset from the stationarity conditions: free points pin -y_t G_t exactly,
  // otherwise take the midpoint of the feasible interval.
  double free_sum = 0.0;
  Index free_count = 0;
  double up = -std::numeric_limits<double>::infinity();
  double low = std::numeric_limits<double>::infinity();
  for (Index t = 0; t < m; ++t) {
    double v = -prob.y[t] * grad[t];
    if (alpha[t] > 0 && alpha[t] < prob.c[t]) {
      free_sum += v;
      ++free_count;
    }
    if (is_up(t)) up = std::max(up, v);
    if (is_low(t)) low = std::min(low, v);
  }
  if (free_count > 0)
    res.bias = free_sum / static_cast<double>(free_count);
  else if (std::isfinite(up) && std::isfinite(low))
    res.bias = 0.5 * (up + low);
  else
    res.bias = 0.0;

  res.alpha = std::move(alpha);
  return res;
}

}  // namespace albench
