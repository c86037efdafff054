#pragma once

#include "albench/common.hpp"

namespace albench {

// K(x, y) = exp(-gamma * ||x - y||^2)
Matrix rbf_kernel(const Matrix& a, const Matrix& b, double gamma);

Matrix linear_kernel(const Matrix& a, const Matrix& b);

// sklearn-style `scale`: 1 / (d * Var(X)) with Var over all entries.
double gamma_scale(const Matrix& x);

// Median of all pairwise Euclidean distances (strictly upper triangle).
double median_pairwise_distance(const Matrix& x);

Matrix pairwise_sq_dist(const Matrix& a, const Matrix& b);

}  // namespace albench
