#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "albench/metrics.hpp"
#include "testutil.hpp"

using namespace albench;

TEST_CASE("accuracy counts matches") {
  CHECK(accuracy({0, 1, 1, 0}, {0, 1, 1, 0}) == 1.0);
  CHECK(accuracy({0, 1, 1, 0}, {0, 1, 0, 0}) == doctest::Approx(0.75));
  CHECK_THROWS_AS(accuracy({0, 1}, {0}), MetricError);
}

TEST_CASE("accuracy of random binary guesses sits at the coin-flip floor") {
  Rng rng(99);
  Labels y(10000), p(10000);
  for (Index i = 0; i < y.size(); ++i) {
    y[i] = static_cast<int>(rng.uniform_index(2));
    p[i] = static_cast<int>(rng.uniform_index(2));
  }
  CHECK(accuracy(y, p) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("auc handles perfect, tied and hand-computed rankings") {
  Matrix perfect(4, 2);
  perfect << 0.9, 0.1, 0.8, 0.2, 0.2, 0.8, 0.1, 0.9;
  CHECK(auc({0, 0, 1, 1}, perfect) == doctest::Approx(1.0));

  Matrix flat = Matrix::Constant(4, 2, 0.5);
  CHECK(auc({0, 0, 1, 1}, flat) == doctest::Approx(0.5));

  Matrix hand(4, 2);
  hand << 0.9, 0.1, 0.6, 0.4, 0.65, 0.35, 0.2, 0.8;
  CHECK(auc({0, 0, 1, 1}, hand) == doctest::Approx(0.75));
}

TEST_CASE("auc is invariant under strictly increasing score transforms") {
  Rng rng(123);
  for (int rep = 0; rep < 30; ++rep) {
    Index n = 8 + rng.uniform_index(20);
    Matrix proba(static_cast<Eigen::Index>(n), 2);
    Labels y(n);
    bool pos = false, neg = false;
    for (Index i = 0; i < n; ++i) {
      double p = rng.uniform();
      proba(static_cast<Eigen::Index>(i), 1) = p;
      proba(static_cast<Eigen::Index>(i), 0) = 1 - p;
      y[i] = static_cast<int>(rng.uniform_index(2));
      (y[i] ? pos : neg) = true;
    }
    if (!pos || !neg) continue;
    Matrix warped = proba;
    for (Eigen::Index i = 0; i < warped.rows(); ++i) {
      double p = warped(i, 1);
      warped(i, 1) = std::exp(3.0 * p);  // strictly increasing
      warped(i, 0) = -warped(i, 1);
    }
    CHECK(auc(y, proba) == doctest::Approx(auc(y, warped)).epsilon(1e-12));
  }
}

TEST_CASE("auc errors when only one class is present") {
  Matrix proba = Matrix::Constant(3, 2, 0.5);
  CHECK_THROWS_AS(auc({1, 1, 1}, proba), MetricError);
}

TEST_CASE("multi-class auc macro-averages the one-vs-rest curves") {
  // Three classes, class 2 perfectly ranked, classes 0/1 anti-ranked vs tied.
  Matrix proba(4, 3);
  proba << 0.8, 0.1, 0.1,
           0.7, 0.2, 0.1,
           0.1, 0.2, 0.7,
           0.1, 0.1, 0.8;
  Labels y = {0, 0, 2, 2};  // class 1 absent: skipped by presence rule
  double v = auc(y, proba);
  CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("f1 binary follows the class-1 convention") {
  CHECK(f1({1, 1, 0, 0}, {1, 1, 0, 0}) == doctest::Approx(1.0));
  CHECK(f1({1, 1, 0, 0}, {1, 0, 0, 0}) == doctest::Approx(2.0 / 3.0));
  CHECK(f1({0, 0, 0, 0}, {0, 0, 0, 0}) == 0.0);  // no positives at all
}

TEST_CASE("f1 macro-averages over classes present in y_true") {
  Labels y = {0, 0, 1, 2};
  Labels p = {0, 0, 1, 1};
  // class0 F1 = 1, class1 F1 = 2*1*0.5/1.5 = 2/3, class2 F1 = 0
  CHECK(f1(y, p, 3) == doctest::Approx((1.0 + 2.0 / 3.0 + 0.0) / 3.0));
}

TEST_CASE("aubc normalizes the trapezoid area") {
  BudgetCurve constant;
  constant.points = {{20, 0.8}, {37, 0.8}, {100, 0.8}};
  CHECK(aubc(constant) == doctest::Approx(0.8).epsilon(1e-15));

  BudgetCurve steps;
  steps.points = {{20, 0.5}, {21, 0.7}, {22, 0.9}};
  CHECK(aubc(steps) == doctest::Approx(0.7));

  BudgetCurve uneven;
  uneven.points = {{0, 0.0}, {1, 1.0}, {3, 1.0}};
  CHECK(aubc(uneven) == doctest::Approx(2.5 / 3.0));
}

TEST_CASE("aubc rejects degenerate curves") {
  BudgetCurve c;
  c.points = {{20, 0.5}};
  CHECK_THROWS_AS(aubc(c), MetricError);
  c.points = {{20, 0.5}, {20, 0.6}};
  CHECK_THROWS_AS(aubc(c), MetricError);
  c.points = {{20, 0.5}, {21, 1.5}};
  CHECK_THROWS_AS(aubc(c), MetricError);
}

TEST_CASE("aubc ignores points on the linear interpolant") {
  Rng rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    BudgetCurve base;
    Index x = 10;
    for (int i = 0; i < 6; ++i) {
      base.points.emplace_back(x, rng.uniform());
      x += 1 + rng.uniform_index(5);
    }
    // Insert a midpoint on one segment (x gap >= 2 required).
    BudgetCurve widened = base;
    bool inserted = false;
    for (Index i = 0; i + 1 < base.points.size() && !inserted; ++i) {
      Index a = base.points[i].first, b = base.points[i + 1].first;
      if (b - a < 2) continue;
      Index mid = a + (b - a) / 2;
      double t = static_cast<double>(mid - a) / static_cast<double>(b - a);
      double v = (1 - t) * base.points[i].second + t * base.points[i + 1].second;
      widened.points.insert(widened.points.begin() + static_cast<long>(i) + 1,
                            {mid, v});
      inserted = true;
    }
    if (!inserted) continue;
    CHECK(aubc(widened) == doctest::Approx(aubc(base)).epsilon(1e-12));
  }
}

TEST_CASE("metrics are invariant under joint row permutations") {
  Rng rng(31);
  Labels y, p;
  Matrix proba(40, 2);
  for (Index i = 0; i < 40; ++i) {
    y.push_back(static_cast<int>(rng.uniform_index(2)));
    p.push_back(static_cast<int>(rng.uniform_index(2)));
    double pr = rng.uniform();
    proba(static_cast<Eigen::Index>(i), 1) = pr;
    proba(static_cast<Eigen::Index>(i), 0) = 1 - pr;
  }
  IndexList perm(40);
  std::iota(perm.begin(), perm.end(), Index{0});
  rng.shuffle(perm);
  Labels y2(40), p2(40);
  Matrix proba2(40, 2);
  for (Index i = 0; i < 40; ++i) {
    y2[i] = y[perm[i]];
    p2[i] = p[perm[i]];
    proba2.row(static_cast<Eigen::Index>(i)) =
        proba.row(static_cast<Eigen::Index>(perm[i]));
  }
  CHECK(accuracy(y, p) == doctest::Approx(accuracy(y2, p2)).epsilon(1e-15));
  CHECK(f1(y, p) == doctest::Approx(f1(y2, p2)).epsilon(1e-15));
  CHECK(auc(y, proba) == doctest::Approx(auc(y2, proba2)).epsilon(1e-12));
}
