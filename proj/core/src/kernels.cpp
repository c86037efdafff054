#include "albench/kernels.hpp"

#include <algorithm>

namespace albench {

Matrix pairwise_sq_dist(const Matrix& a, const Matrix& b) {
  Vector an = a.rowwise().squaredNorm();
  Vector bn = b.rowwise().squaredNorm();
  Matrix d = -2.0 * (a * b.transpose());
  d.colwise() += an;
  d.rowwise() += bn.transpose();
  return d.cwiseMax(0.0);
}

Matrix rbf_kernel(const Matrix& a, const Matrix& b, double gamma) {
  Matrix k = pairwise_sq_dist(a, b);
  k = (-gamma * k).array().exp();
  return k;
}

Matrix linear_kernel(const Matrix& a, const Matrix& b) {
  return a * b.transpose();
}

double gamma_scale(const Matrix& x) {
  double n = static_cast<double>(x.size());
  double mean = x.sum() / n;
  double var = (x.array() - mean).square().sum() / n;
  double d = static_cast<double>(x.cols());
  double denom = d * var;
  if (denom <= 0.0) return 1.0;
  return 1.0 / denom;
}

double median_pairwise_distance(const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (n < 2) return 1.0;
  std::vector<double> dists;
  dists.reserve(static_cast<Index>(n) * (static_cast<Index>(n) - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      dists.push_back((x.row(i) - x.row(j)).norm());
  auto mid = dists.begin() + static_cast<long>(dists.size() / 2);
  std::nth_element(dists.begin(), mid, dists.end());
  double med = *mid;
  return med > 0.0 ? med : 1.0;
}

}  // namespace albench
