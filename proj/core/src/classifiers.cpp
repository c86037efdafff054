#include "albench/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Cholesky>

#include "albench/kernels.hpp"
#include "albench/smo.hpp"

namespace albench {

std::string classifier_kind_name(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::Logreg: return "logreg";
    case ClassifierKind::SvmLinear: return "svm_linear";
    case ClassifierKind::SvmRbf: return "svm_rbf";
    case ClassifierKind::KernelLogreg: return "kernel_logreg";
    default: return "gpc";
  }
}

void ClassifierSpec::validate() const {
  if (c <= 0) throw TrainError("classifier spec: C must be positive");
  if (tol <= 0) throw TrainError("classifier spec: tol must be positive");
  if (max_iter < 1) throw TrainError("classifier spec: max_iter must be >= 1");
}

namespace {

Matrix augment(const Matrix& x) {
  Matrix xa(x.rows(), x.cols() + 1);
  xa.leftCols(x.cols()) = x;
  xa.col(x.cols()).setOnes();
  return xa;
}

int count_classes(const Labels& y) {
  int k = 0;
  for (int v : y) {
    if (v < 0) throw TrainError("labels must be non-negative");
    k = std::max(k, v + 1);
  }
  return k;
}

void check_training_inputs(const Matrix& x, const Labels& y) {
  if (static_cast<Index>(x.rows()) != y.size())
    throw TrainError("fit: feature rows must match label count");
  if (x.rows() < 2) throw TrainError("fit: need at least 2 samples");
  if (!x.allFinite()) throw TrainError("fit: non-finite feature value");
  std::set<int> classes(y.begin(), y.end());
  if (classes.size() < 2) throw TrainError("fit: labels contain a single class");
}

// Probabilities for the reduced parameterization: coef is (K-1) x (d+1) and
// class K-1 is the implicit reference with logit 0.
Matrix reduced_softmax(const Matrix& coef, const Matrix& xa, int k) {
  Matrix z(xa.rows(), k);
  z.leftCols(k - 1) = xa * coef.transpose();
  z.col(k - 1).setZero();
  Vector zmax = z.rowwise().maxCoeff();
  z.colwise() -= zmax;
  Matrix e = z.array().exp();
  Vector denom = e.rowwise().sum();
  return e.array().colwise() / denom.array();
}

}  // namespace

double logreg_loss(const Matrix& coef, const Matrix& x, const Labels& y,
                   int k_classes, double c) {
  Matrix xa = augment(x);
  Matrix p = reduced_softmax(coef, xa, k_classes);
  double nll = 0;
  for (Index i = 0; i < y.size(); ++i)
    nll -= std::log(std::max(p(static_cast<Eigen::Index>(i), y[i]), 1e-300));
  double penalty =
      coef.leftCols(coef.cols() - 1).squaredNorm() / (2.0 * c);
  return nll + penalty;
}

Matrix logreg_gradient(const Matrix& coef, const Matrix& x, const Labels& y,
                       int k_classes, double c) {
  Matrix xa = augment(x);
  Matrix p = reduced_softmax(coef, xa, k_classes);
  Matrix r = p.leftCols(k_classes - 1);
  for (Index i = 0; i < y.size(); ++i)
    if (y[i] < k_classes - 1) r(static_cast<Eigen::Index>(i), y[i]) -= 1.0;
  Matrix grad = r.transpose() * xa;
  grad.leftCols(grad.cols() - 1) += coef.leftCols(coef.cols() - 1) / c;
  return grad;
}

namespace {

Matrix fit_logreg_coef(const Matrix& x, const Labels& y, int k,
                       const ClassifierSpec& spec) {
  const Matrix xa = augment(x);
  const Eigen::Index da = xa.cols();
  const Eigen::Index kb = k - 1;
  Matrix coef = Matrix::Zero(kb, da);

  double loss = logreg_loss(coef, x, y, k, spec.c);
  for (int iter = 0; iter < spec.max_iter; ++iter) {
    Matrix grad = logreg_gradient(coef, x, y, k, spec.c);
    if (grad.norm() <= spec.tol) break;

    // Full Newton system over the (K-1)(d+1) block.
    Matrix p = reduced_softmax(coef, xa, k);
    Matrix h = Matrix::Zero(kb * da, kb * da);
    for (Eigen::Index i = 0; i < xa.rows(); ++i) {
      Matrix xxt = xa.row(i).transpose() * xa.row(i);
      for (Eigen::Index a = 0; a < kb; ++a) {
        double pa = p(i, a);
        for (Eigen::Index b = 0; b < kb; ++b) {
          double w = pa * ((a == b ? 1.0 : 0.0) - p(i, b));
          if (w != 0.0) h.block(a * da, b * da, da, da) += w * xxt;
        }
      }
    }
    for (Eigen::Index a = 0; a < kb; ++a)
      for (Eigen::Index j = 0; j + 1 < da; ++j)
        h(a * da + j, a * da + j) += 1.0 / spec.c;
    h.diagonal().array() += 1e-10;

    Vector gflat(kb * da);
    for (Eigen::Index a = 0; a < kb; ++a)
      gflat.segment(a * da, da) = grad.row(a).transpose();

    Eigen::LDLT<Matrix> ldlt(h);
    Vector step = ldlt.solve(gflat);
    if (!step.allFinite()) step = gflat;  // damped fallback

    // Backtracking so every iteration decreases the loss.
    double t = 1.0;
    Matrix trial;
    double trial_loss = loss;
    for (int ls = 0; ls < 60; ++ls) {
      trial = coef;
      for (Eigen::Index a = 0; a < kb; ++a)
        trial.row(a) -= t * step.segment(a * da, da).transpose();
      trial_loss = logreg_loss(trial, x, y, k, spec.c);
      if (trial_loss <= loss) break;
      t *= 0.5;
    }
    if (trial_loss > loss) break;
    coef = trial;
    loss = trial_loss;
  }
  return coef;
}

// Platt sigmoid on decision values (Newton with backtracking). Returns false
// when the fit cannot be trusted and the caller should use the fallback.
bool fit_platt(const std::vector<double>& f, const std::vector<int>& pos,
               double& a_out, double& b_out) {
  const Index n = f.size();
  double prior1 = 0, prior0 = 0;
  for (Index i = 0; i < n; ++i) (pos[i] ? prior1 : prior0) += 1;
  if (prior1 == 0 || prior0 == 0) return false;

  // Perfect separation makes the sigmoid degenerate.
  double min_pos = 1e300, max_neg = -1e300;
  for (Index i = 0; i < n; ++i) {
    if (pos[i]) min_pos = std::min(min_pos, f[i]);
    else max_neg = std::max(max_neg, f[i]);
  }
  if (min_pos > max_neg) return false;

  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (Index i = 0; i < n; ++i) t[i] = pos[i] ? hi : lo;

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  const double min_step = 1e-10, sigma = 1e-12, eps = 1e-5;

  auto objective = [&](double aa, double bb) {
    double obj = 0;
    for (Index i = 0; i < n; ++i) {
      double z = aa * f[i] + bb;
      if (z >= 0)
        obj += t[i] * z + std::log1p(std::exp(-z));
      else
        obj += (t[i] - 1) * z + std::log1p(std::exp(z));
    }
    return obj;
  };

  double obj = objective(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = sigma, h22 = sigma, h21 = 0, g1 = 0, g2 = 0;
    for (Index i = 0; i < n; ++i) {
      double z = a * f[i] + b;
      double p, q;
      if (z >= 0) {
        double e = std::exp(-z);
        p = e / (1.0 + e);
        q = 1.0 / (1.0 + e);
      } else {
        double e = std::exp(z);
        p = 1.0 / (1.0 + e);
        q = e / (1.0 + e);
      }
      double d2 = p * q;
      h11 += f[i] * f[i] * d2;
      h22 += d2;
      h21 += f[i] * d2;
      double d1 = t[i] - p;
      g1 += f[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < eps && std::abs(g2) < eps) break;

    double det = h11 * h22 - h21 * h21;
    double da = -(h22 * g1 - h21 * g2) / det;
    double db = -(-h21 * g1 + h11 * g2) / det;
    double gd = g1 * da + g2 * db;

    double step = 1.0;
    bool ok = false;
    while (step >= min_step) {
      double na = a + step * da, nb = b + step * db;
      double nobj = objective(na, nb);
      if (nobj < obj + 1e-4 * step * gd) {
        a = na;
        b = nb;
        obj = nobj;
        ok = true;
        break;
      }
      step /= 2.0;
    }
    if (!ok) return false;
  }
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  a_out = a;
  b_out = b;
  return true;
}

SvmMachine fit_svm_machine(const Matrix& x, const Matrix& gram,
                           const std::vector<int>& positive,
                           const ClassifierSpec& spec) {
  const Index m = positive.size();
  SmoProblem prob;
  prob.gram = &gram;
  prob.y.resize(m);
  for (Index i = 0; i < m; ++i) prob.y[i] = positive[i] ? 1.0 : -1.0;
  prob.c.assign(m, spec.c);
  prob.p.assign(m, -1.0);
  prob.tol = std::max(spec.tol, 1e-6);
  SmoResult sol = solve_smo(prob);

  SvmMachine machine;
  std::vector<Index> sv;
  for (Index i = 0; i < m; ++i)
    if (sol.alpha[i] > 1e-12) sv.push_back(i);
  machine.support.resize(static_cast<Eigen::Index>(sv.size()), x.cols());
  machine.dual_coef.resize(static_cast<Eigen::Index>(sv.size()));
  for (Index s = 0; s < sv.size(); ++s) {
    machine.support.row(static_cast<Eigen::Index>(s)) =
        x.row(static_cast<Eigen::Index>(sv[s]));
    machine.dual_coef(static_cast<Eigen::Index>(s)) =
        sol.alpha[sv[s]] * prob.y[sv[s]];
  }
  machine.bias = sol.bias;

  // Calibrate on the training decision values.
  std::vector<double> f(m);
  for (Index i = 0; i < m; ++i) {
    double v = sol.bias;
    for (Index s = 0; s < sv.size(); ++s)
      v += machine.dual_coef(static_cast<Eigen::Index>(s)) *
           gram(static_cast<Eigen::Index>(sv[s]), static_cast<Eigen::Index>(i));
    f[i] = v;
  }
  double a, b;
  if (fit_platt(f, positive, a, b)) {
    machine.platt_a = a;
    machine.platt_b = b;
    machine.calibrated = true;
  } else {
    machine.platt_a = -2.0;  // sigmoid(2 f) fallback
    machine.platt_b = 0.0;
    machine.calibrated = false;
  }
  return machine;
}

TrainedModel fit_svm(const ClassifierSpec& spec, const Matrix& x,
                     const Labels& y, int k) {
  TrainedModel model;
  model.spec = spec;
  model.classes = k;
  model.dim = static_cast<Index>(x.cols());

  SvmParams params;
  params.rbf = spec.kind == ClassifierKind::SvmRbf;
  params.gamma = params.rbf
                     ? (spec.rbf_gamma > 0 ? spec.rbf_gamma : gamma_scale(x))
                     : 0.0;
  Matrix gram = params.rbf ? rbf_kernel(x, x, params.gamma) : linear_kernel(x, x);

  const Index m = y.size();
  if (k == 2) {
    std::vector<int> positive(m);
    for (Index i = 0; i < m; ++i) positive[i] = y[i] == 1;
    params.machines.push_back(fit_svm_machine(x, gram, positive, spec));
  } else {
    for (int cls = 0; cls < k; ++cls) {
      std::vector<int> positive(m);
      for (Index i = 0; i < m; ++i) positive[i] = y[i] == cls;
      params.machines.push_back(fit_svm_machine(x, gram, positive, spec));
    }
  }
  model.params = std::move(params);
  return model;
}

double machine_sigmoid(const SvmMachine& machine, double f) {
  double z = machine.platt_a * f + machine.platt_b;
  if (z >= 0) {
    double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

Matrix svm_decision(const SvmParams& params, const Matrix& x) {
  Matrix out(x.rows(), static_cast<Eigen::Index>(params.machines.size()));
  for (Index mi = 0; mi < params.machines.size(); ++mi) {
    const SvmMachine& mach = params.machines[mi];
    if (mach.support.rows() == 0) {
      out.col(static_cast<Eigen::Index>(mi)).setConstant(mach.bias);
      continue;
    }
    Matrix k = params.rbf ? rbf_kernel(x, mach.support, params.gamma)
                          : linear_kernel(x, mach.support);
    out.col(static_cast<Eigen::Index>(mi)) =
        (k * mach.dual_coef).array() + mach.bias;
  }
  return out;
}

// ---- Nystrom kernel logistic regression -----------------------------------

TrainedModel fit_kernel_logreg(const ClassifierSpec& spec, const Matrix& x,
                               const Labels& y, int k) {
  const Eigen::Index m = x.rows();
  const Eigen::Index rank_cap = 64;
  Eigen::Index r = std::min<Eigen::Index>(rank_cap, m);

  // Deterministic landmark choice: evenly spaced training rows.
  std::vector<Eigen::Index> landmark_rows;
  for (Eigen::Index j = 0; j < r; ++j)
    landmark_rows.push_back(j * m / r);
  landmark_rows.erase(std::unique(landmark_rows.begin(), landmark_rows.end()),
                      landmark_rows.end());
  r = static_cast<Eigen::Index>(landmark_rows.size());

  KernelLogregParams params;
  params.gamma = spec.rbf_gamma > 0 ? spec.rbf_gamma : gamma_scale(x);
  params.landmarks.resize(r, x.cols());
  for (Eigen::Index j = 0; j < r; ++j)
    params.landmarks.row(j) = x.row(landmark_rows[static_cast<Index>(j)]);

  Matrix kmm = rbf_kernel(params.landmarks, params.landmarks, params.gamma);
  kmm.diagonal().array() += 1e-10;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(kmm);
  double cutoff = 1e-10 * eig.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < r; ++i)
    if (eig.eigenvalues()(i) > cutoff) keep.push_back(i);
  params.feature_map.resize(r, static_cast<Eigen::Index>(keep.size()));
  for (Index c = 0; c < keep.size(); ++c)
    params.feature_map.col(static_cast<Eigen::Index>(c)) =
        eig.eigenvectors().col(keep[c]) /
        std::sqrt(eig.eigenvalues()(keep[c]));

  Matrix phi = rbf_kernel(x, params.landmarks, params.gamma) * params.feature_map;
  params.coef = fit_logreg_coef(phi, y, k, spec);

  TrainedModel model;
  model.spec = spec;
  model.classes = k;
  model.dim = static_cast<Index>(x.cols());
  model.params = std::move(params);
  return model;
}

Matrix kernel_logreg_features(const KernelLogregParams& params, const Matrix& x) {
  return rbf_kernel(x, params.landmarks, params.gamma) * params.feature_map;
}

// ---- Laplace-approximation Gaussian process classifier ---------------------

GpcMachine fit_gpc_machine(const Matrix& gram, const std::vector<int>& positive,
                           int max_iter) {
  const Eigen::Index m = gram.rows();
  Vector t(m);
  for (Eigen::Index i = 0; i < m; ++i) t(i) = positive[static_cast<Index>(i)];

  Vector f = Vector::Zero(m);
  GpcMachine machine;
  for (int iter = 0; iter < std::max(max_iter, 30); ++iter) {
    Vector pi = (1.0 / (1.0 + (-f.array()).exp())).matrix();
    Vector w = (pi.array() * (1.0 - pi.array())).cwiseMax(1e-12).matrix();
    Vector sw = w.array().sqrt().matrix();
    Matrix b = Matrix::Identity(m, m) + sw.asDiagonal() * gram * sw.asDiagonal();
    Eigen::LLT<Matrix> llt(b);
    Vector bvec = w.asDiagonal() * f + (t - pi);
    Vector inner = llt.solve(sw.asDiagonal() * (gram * bvec));
    Vector a = bvec - sw.asDiagonal() * inner;
    Vector f_new = gram * a;
    double delta = (f_new - f).norm();
    f = f_new;
    if (delta < 1e-8) break;
  }
  Vector pi = (1.0 / (1.0 + (-f.array()).exp())).matrix();
  Vector w = (pi.array() * (1.0 - pi.array())).cwiseMax(1e-12).matrix();
  machine.grad = t - pi;
  machine.sqrt_w = w.array().sqrt().matrix();
  Matrix b = Matrix::Identity(m, m) +
             machine.sqrt_w.asDiagonal() * gram * machine.sqrt_w.asDiagonal();
  machine.chol = Eigen::LLT<Matrix>(b).matrixL();
  return machine;
}

TrainedModel fit_gpc(const ClassifierSpec& spec, const Matrix& x,
                     const Labels& y, int k) {
  GpcParams params;
  params.train = x;
  params.gamma = spec.rbf_gamma > 0 ? spec.rbf_gamma : gamma_scale(x);
  Matrix gram = rbf_kernel(x, x, params.gamma);
  gram.diagonal().array() += 1e-8;

  const Index m = y.size();
  int machines = k == 2 ? 1 : k;
  for (int cls = 0; cls < machines; ++cls) {
    int target = k == 2 ? 1 : cls;
    std::vector<int> positive(m);
    for (Index i = 0; i < m; ++i) positive[i] = y[i] == target;
    params.machines.push_back(fit_gpc_machine(gram, positive, spec.max_iter));
  }

  TrainedModel model;
  model.spec = spec;
  model.classes = k;
  model.dim = static_cast<Index>(x.cols());
  model.params = std::move(params);
  return model;
}

// Latent mean and MacKay-corrected probability per machine.
Matrix gpc_latent(const GpcParams& params, const Matrix& x, Matrix* proba) {
  Matrix kstar = rbf_kernel(x, params.train, params.gamma);
  Matrix latent(x.rows(), static_cast<Eigen::Index>(params.machines.size()));
  if (proba)
    proba->resize(x.rows(), static_cast<Eigen::Index>(params.machines.size()));
  for (Index mi = 0; mi < params.machines.size(); ++mi) {
    const GpcMachine& mach = params.machines[mi];
    Vector mean = kstar * mach.grad;
    latent.col(static_cast<Eigen::Index>(mi)) = mean;
    if (!proba) continue;
    Matrix v = mach.chol.triangularView<Eigen::Lower>().solve(
        mach.sqrt_w.asDiagonal() * kstar.transpose());
    Vector var =
        (1.0 - v.array().square().colwise().sum().transpose()).cwiseMax(1e-12);
    Vector kappa = (1.0 + var.array() * M_PI / 8.0).rsqrt();
    proba->col(static_cast<Eigen::Index>(mi)) =
        (1.0 / (1.0 + (-(kappa.array() * mean.array())).exp())).matrix();
  }
  return latent;
}

}  // namespace

TrainedModel fit(const ClassifierSpec& spec, const Matrix& x, const Labels& y) {
  spec.validate();
  check_training_inputs(x, y);
  int k = count_classes(y);

  switch (spec.kind) {
    case ClassifierKind::Logreg: {
      TrainedModel model;
      model.spec = spec;
      model.classes = k;
      model.dim = static_cast<Index>(x.cols());
      model.params = LogregParams{fit_logreg_coef(x, y, k, spec)};
      return model;
    }
    case ClassifierKind::KernelLogreg:
      return fit_kernel_logreg(spec, x, y, k);
    case ClassifierKind::Gpc:
      return fit_gpc(spec, x, y, k);
    case ClassifierKind::SvmLinear:
    case ClassifierKind::SvmRbf:
      return fit_svm(spec, x, y, k);
  }
  throw TrainError("unknown classifier kind");
}

Matrix predict_proba(const TrainedModel& model, const Matrix& x) {
  if (static_cast<Index>(x.cols()) != model.dim)
    throw TrainError("predict_proba: feature dimension mismatch");
  const int k = model.classes;

  if (const auto* lr = std::get_if<LogregParams>(&model.params))
    return reduced_softmax(lr->coef, augment(x), k);

  if (const auto* klr = std::get_if<KernelLogregParams>(&model.params))
    return reduced_softmax(klr->coef, augment(kernel_logreg_features(*klr, x)), k);

  if (const auto* gpc = std::get_if<GpcParams>(&model.params)) {
    Matrix machine_proba;
    gpc_latent(*gpc, x, &machine_proba);
    Matrix proba(x.rows(), k);
    if (k == 2) {
      proba.col(1) = machine_proba.col(0);
      proba.col(0) = 1.0 - machine_proba.col(0).array();
    } else {
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double sum = machine_proba.row(i).sum();
        if (sum < 1e-12)
          proba.row(i).setConstant(1.0 / k);
        else
          proba.row(i) = machine_proba.row(i) / sum;
      }
    }
    return proba;
  }

  const auto& svm = std::get<SvmParams>(model.params);
  Matrix f = svm_decision(svm, x);
  Matrix proba(x.rows(), k);
  if (k == 2) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double p1 = machine_sigmoid(svm.machines[0], f(i, 0));
      proba(i, 0) = 1.0 - p1;
      proba(i, 1) = p1;
    }
  } else {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double sum = 0;
      for (int c = 0; c < k; ++c) {
        double p = machine_sigmoid(svm.machines[static_cast<Index>(c)], f(i, c));
        proba(i, c) = p;
        sum += p;
      }
      if (sum < 1e-12)
        proba.row(i).setConstant(1.0 / k);
      else
        proba.row(i) /= sum;
    }
  }
  return proba;
}

Labels argmax_rows(const Matrix& proba) {
  Labels out(static_cast<Index>(proba.rows()));
  for (Eigen::Index i = 0; i < proba.rows(); ++i) {
    int best = 0;
    for (Eigen::Index c = 1; c < proba.cols(); ++c)
      if (proba(i, c) > proba(i, best)) best = static_cast<int>(c);
    out[static_cast<Index>(i)] = best;
  }
  return out;
}

Labels predict(const TrainedModel& model, const Matrix& x) {
  return argmax_rows(predict_proba(model, x));
}

Matrix decision_values(const TrainedModel& model, const Matrix& x) {
  if (static_cast<Index>(x.cols()) != model.dim)
    throw TrainError("decision_values: feature dimension mismatch");
  const int k = model.classes;

  if (const auto* lr = std::get_if<LogregParams>(&model.params)) {
    Matrix z(x.rows(), k);
    z.leftCols(k - 1) = augment(x) * lr->coef.transpose();
    z.col(k - 1).setZero();
    return z;
  }
  if (const auto* klr = std::get_if<KernelLogregParams>(&model.params)) {
    Matrix z(x.rows(), k);
    z.leftCols(k - 1) =
        augment(kernel_logreg_features(*klr, x)) * klr->coef.transpose();
    z.col(k - 1).setZero();
    return z;
  }
  if (const auto* gpc = std::get_if<GpcParams>(&model.params))
    return gpc_latent(*gpc, x, nullptr);

  return svm_decision(std::get<SvmParams>(model.params), x);
}

std::vector<ClassifierSpec> committee_specs(bool use_gpc) {
  std::vector<ClassifierSpec> specs(4);
  specs[0].kind = ClassifierKind::Logreg;
  specs[1].kind = ClassifierKind::SvmLinear;
  specs[2].kind = ClassifierKind::SvmRbf;
  specs[3].kind = use_gpc ? ClassifierKind::Gpc : ClassifierKind::KernelLogreg;
  return specs;
}

}  // namespace albench
