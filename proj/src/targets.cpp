// Copyright 2026 The lcmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lcmc/targets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "lcmc/error.hpp"
#include "lcmc/theory.hpp"

namespace lcmc {
namespace {

// log(1 + e^u) without overflow.
double softplus(double u) { return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))); }

// 1 / (1 + e^{-u}).
double sigmoid(double u) {
  if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

class FunctionModel final : public NegLogDensity {
 public:
  FunctionModel(std::function<double(const Vector&)> f, std::function<Vector(const Vector&)> grad)
      : f_(std::move(f)), grad_(std::move(grad)) {}
  double value(ConstVectorRef x) const override { return f_(Vector(x)); }
  void gradient(ConstVectorRef x, VectorRef g) const override { g = grad_(Vector(x)); }

 private:
  std::function<double(const Vector&)> f_;
  std::function<Vector(const Vector&)> grad_;
};

class DiagonalGaussianModel final : public NegLogDensity {
 public:
  explicit DiagonalGaussianModel(Vector precision) : precision_(std::move(precision)) {}
  double value(ConstVectorRef x) const override {
    return 0.5 * (x.array().square() * precision_.array()).sum();
  }
  void gradient(ConstVectorRef x, VectorRef g) const override {
    g = x.cwiseProduct(precision_);
  }
  double value_and_gradient(ConstVectorRef x, VectorRef g) const override {
    g = x.cwiseProduct(precision_);
    return 0.5 * x.dot(g);
  }
  void value_batch(const Matrix& X, VectorRef f) const override {
    f = 0.5 * (X.array().square().colwise() * precision_.array()).colwise().sum().transpose();
  }
  void value_and_gradient_batch(const Matrix& X, VectorRef f, Matrix& G) const override {
    G.array() = X.array().colwise() * precision_.array();
    f = 0.5 * (X.array() * G.array()).colwise().sum().transpose();
  }

 private:
  Vector precision_;
};

class DenseGaussianModel final : public NegLogDensity {
 public:
  explicit DenseGaussianModel(Matrix precision) : precision_(std::move(precision)) {}
  double value(ConstVectorRef x) const override { return 0.5 * x.dot(precision_ * x); }
  void gradient(ConstVectorRef x, VectorRef g) const override { g.noalias() = precision_ * x; }
  double value_and_gradient(ConstVectorRef x, VectorRef g) const override {
    g.noalias() = precision_ * x;
    return 0.5 * x.dot(g);
  }

 private:
  Matrix precision_;
};

// f(x) = ½‖x - a‖² - log(1 + e^{-2x'a})
class MixtureModel final : public NegLogDensity {
 public:
  explicit MixtureModel(Vector a) : a_(std::move(a)) {}
  double value(ConstVectorRef x) const override {
    return 0.5 * (x - a_).squaredNorm() - softplus(-2.0 * x.dot(a_));
  }
  void gradient(ConstVectorRef x, VectorRef g) const override {
    const double t = x.dot(a_);
    g = x - a_ + 2.0 * sigmoid(-2.0 * t) * a_;
  }
  double value_and_gradient(ConstVectorRef x, VectorRef g) const override {
    const double t = x.dot(a_);
    g = x - a_ + 2.0 * sigmoid(-2.0 * t) * a_;
    return 0.5 * (x - a_).squaredNorm() - softplus(-2.0 * t);
  }

 private:
  Vector a_;
};

class LogisticModel final : public NegLogDensity {
 public:
  explicit LogisticModel(const LogisticData& data)
      : X_(data.X), XtY_(data.X.transpose() * data.Y), prior_(data.alpha * data.sigma_x) {}

  double value(ConstVectorRef theta) const override {
    const Vector eta = X_ * theta;
    double f = -XtY_.dot(theta) + 0.5 * theta.dot(prior_ * theta);
    for (Eigen::Index i = 0; i < eta.size(); ++i) f += softplus(eta[i]);
    return f;
  }
  void gradient(ConstVectorRef theta, VectorRef g) const override {
    Vector eta = X_ * theta;
    for (Eigen::Index i = 0; i < eta.size(); ++i) eta[i] = sigmoid(eta[i]);
    g.noalias() = X_.transpose() * eta;
    g -= XtY_;
    g.noalias() += prior_ * theta;
  }
  double value_and_gradient(ConstVectorRef theta, VectorRef g) const override {
    Vector eta = X_ * theta;
    double f = -XtY_.dot(theta) + 0.5 * theta.dot(prior_ * theta);
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      f += softplus(eta[i]);
      eta[i] = sigmoid(eta[i]);
    }
    g.noalias() = X_.transpose() * eta;
    g -= XtY_;
    g.noalias() += prior_ * theta;
    return f;
  }

 private:
  Matrix X_;
  Vector XtY_;
  Matrix prior_;
};

// g(y) = f(S y), ∇g(y) = S'∇f(S y) with S symmetric.
class LinearPullbackModel final : public NegLogDensity {
 public:
  LinearPullbackModel(std::shared_ptr<const NegLogDensity> base, Matrix map)
      : base_(std::move(base)), map_(std::move(map)) {}
  double value(ConstVectorRef y) const override { return base_->value(map_ * y); }
  void gradient(ConstVectorRef y, VectorRef g) const override {
    Vector inner(map_.rows());
    base_->gradient(map_ * y, inner);
    g.noalias() = map_.transpose() * inner;
  }
  double value_and_gradient(ConstVectorRef y, VectorRef g) const override {
    Vector inner(map_.rows());
    const double f = base_->value_and_gradient(map_ * y, inner);
    g.noalias() = map_.transpose() * inner;
    return f;
  }

 private:
  std::shared_ptr<const NegLogDensity> base_;
  Matrix map_;
};

class RegularizedModel final : public NegLogDensity {
 public:
  RegularizedModel(std::shared_ptr<const NegLogDensity> base, double lambda, Vector center)
      : base_(std::move(base)), lambda_(lambda), center_(std::move(center)) {}
  double value(ConstVectorRef x) const override {
    return base_->value(x) + 0.5 * lambda_ * (x - center_).squaredNorm();
  }
  void gradient(ConstVectorRef x, VectorRef g) const override {
    base_->gradient(x, g);
    g += lambda_ * (x - center_);
  }
  double value_and_gradient(ConstVectorRef x, VectorRef g) const override {
    const double f = base_->value_and_gradient(x, g);
    g += lambda_ * (x - center_);
    return f + 0.5 * lambda_ * (x - center_).squaredNorm();
  }

 private:
  std::shared_ptr<const NegLogDensity> base_;
  double lambda_;
  Vector center_;
};

Eigen::SelfAdjointEigenSolver<Matrix> symmetric_eigen(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InvalidInput(std::string(what) + " must be a non-empty square matrix");
  }
  if (!a.isApprox(a.transpose(), 1e-12)) {
    throw InvalidInput(std::string(what) + " must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) {
    throw InvalidInput(std::string("eigendecomposition of ") + what + " failed");
  }
  return eig;
}

}  // namespace

Target::Target(std::string name, int dim, std::shared_ptr<const NegLogDensity> model, double m,
               double L, std::optional<Vector> mode, ExactSampler exact)
    : name_(std::move(name)),
      dim_(dim),
      model_(std::move(model)),
      m_(m),
      L_(L),
      mode_(std::move(mode)),
      exact_(std::move(exact)) {
  if (dim_ <= 0) throw InvalidInput("target dimension must be positive");
  if (!model_) throw InvalidInput("target needs a model");
  if (!(L_ > 0.0) || !(m_ >= 0.0) || m_ > L_) {
    throw InvalidInput("target constants must satisfy L >= m >= 0 and L > 0");
  }
  if (mode_ && mode_->size() != dim_) throw InvalidInput("mode has wrong dimension");
}

Target Target::from_functions(std::string name, int dim, std::function<double(const Vector&)> f,
                              std::function<Vector(const Vector&)> grad, double m, double L,
                              std::optional<Vector> mode) {
  return Target(std::move(name), dim, std::make_shared<FunctionModel>(std::move(f), std::move(grad)),
                m, L, std::move(mode));
}

double Target::kappa() const {
  return m_ > 0.0 ? L_ / m_ : std::numeric_limits<double>::infinity();
}

Vector Target::gradient(ConstVectorRef x) const {
  Vector g(dim_);
  model_->gradient(x, g);
  return g;
}

void Target::sample_exact(Stream& rng, VectorRef out) const {
  if (!exact_) throw Unsupported("target '" + name_ + "' has no exact sampler");
  exact_(rng, out);
}

Vector Target::sample_exact(Stream& rng) const {
  Vector out(dim_);
  sample_exact(rng, out);
  return out;
}

Target Target::with_mode(Vector mode) const {
  Target t = *this;
  if (mode.size() != dim_) throw InvalidInput("mode has wrong dimension");
  t.mode_ = std::move(mode);
  return t;
}

Target Target::with_warning(std::string warning) const {
  Target t = *this;
  t.warnings_.push_back(std::move(warning));
  return t;
}

Target gaussian_target(const Matrix& sigma) {
  const auto eig = symmetric_eigen(sigma, "covariance");
  const Vector& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 0.0)) throw InvalidInput("covariance must be positive definite");
  const int d = static_cast<int>(sigma.rows());
  if (sigma.isDiagonal(0.0)) return diagonal_gaussian_target(sigma.diagonal());

  const Matrix precision = eig.eigenvectors() * ev.cwiseInverse().asDiagonal() *
                           eig.eigenvectors().transpose();
  const Matrix chol = Eigen::LLT<Matrix>(sigma).matrixL();
  ExactSampler exact = [chol](Stream& rng, VectorRef out) {
    Vector z(chol.rows());
    rng.fill_normal(z);
    out.noalias() = chol * z;
  };
  return Target("gaussian", d, std::make_shared<DenseGaussianModel>(precision), 1.0 / ev.maxCoeff(),
                1.0 / ev.minCoeff(), Vector::Zero(d), std::move(exact));
}

Target diagonal_gaussian_target(const Vector& variances) {
  if (variances.size() == 0) throw InvalidInput("covariance must be non-empty");
  if (!(variances.minCoeff() > 0.0) || !variances.allFinite()) {
    throw InvalidInput("covariance must be positive definite");
  }
  const int d = static_cast<int>(variances.size());
  const Vector sd = variances.cwiseSqrt();
  ExactSampler exact = [sd](Stream& rng, VectorRef out) {
    rng.fill_normal(out);
    out.array() *= sd.array();
  };
  return Target("gaussian", d, std::make_shared<DiagonalGaussianModel>(variances.cwiseInverse()),
                1.0 / variances.maxCoeff(), 1.0 / variances.minCoeff(), Vector::Zero(d),
                std::move(exact));
}

Target mixture_target(const Vector& a) {
  if (a.size() == 0) throw InvalidInput("mixture offset must be non-empty");
  const double norm2 = a.squaredNorm();
  if (!(norm2 < 1.0)) throw InvalidInput("mixture offset must satisfy ‖a‖ < 1");
  const int d = static_cast<int>(a.size());
  ExactSampler exact = [a](Stream& rng, VectorRef out) {
    const bool minus = rng.uniform() < 0.5;
    rng.fill_normal(out);
    if (minus) {
      out -= a;
    } else {
      out += a;
    }
  };
  return Target("mixture", d, std::make_shared<MixtureModel>(a), 1.0 - norm2, 1.0, Vector::Zero(d),
                std::move(exact));
}

Matrix exact_mixture_samples(const Vector& a, std::uint64_t seed, std::size_t n) {
  const Target t = mixture_target(a);
  Stream rng(seed);
  Matrix out(a.size(), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) t.sample_exact(rng, out.col(static_cast<Eigen::Index>(j)));
  return out;
}

LogisticData LogisticData::make(Matrix X, Vector Y, double alpha) {
  if (X.rows() == 0 || X.cols() == 0) throw InvalidInput("logistic data must be non-empty");
  if (Y.size() != X.rows()) throw InvalidInput("logistic data: Y length must match rows of X");
  for (Eigen::Index i = 0; i < Y.size(); ++i) {
    if (Y[i] != 0.0 && Y[i] != 1.0) throw InvalidInput("logistic data: responses must be 0 or 1");
  }
  if (!(alpha > 0.0)) throw InvalidInput("logistic data: alpha must be positive");
  LogisticData data;
  data.sigma_x = X.transpose() * X / static_cast<double>(X.rows());
  data.X = std::move(X);
  data.Y = std::move(Y);
  data.alpha = alpha;
  return data;
}

LogisticData LogisticData::synthetic(int n, int d, double alpha, const Vector& theta_star,
                                     double x_norm, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidInput("synthetic logistic data needs n, d >= 1");
  if (theta_star.size() != d) throw InvalidInput("theta_star has wrong dimension");
  Stream rng(seed);
  Matrix X(n, d);
  Vector Y(n);
  const double scale = x_norm / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) X(i, j) = ((rng() >> 63) ? 1.0 : -1.0) * scale;
    Y[i] = rng.uniform() < sigmoid(X.row(i).dot(theta_star)) ? 1.0 : 0.0;
  }
  return make(std::move(X), std::move(Y), alpha);
}

LogisticData LogisticData::from_csv(const std::string& path, double alpha) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open logistic data file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("logistic data file '" + path + "' is empty");
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ParseError("bad number '" + cell + "' in " + path, lineno, cell);
      }
    }
    if (row.size() < 2) throw ParseError("need at least one covariate and a response", lineno, "");
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("inconsistent column count", lineno, "");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("logistic data file '" + path + "' has no rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.front().size()) - 1;
  Matrix X(n, d);
  Vector Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rows[i][j];
    Y[i] = rows[i][d];
  }
  return make(std::move(X), std::move(Y), alpha);
}

Target logistic_posterior(const LogisticData& data) {
  if (data.X.size() == 0) throw InvalidInput("logistic data must be non-empty");
  const auto eig = symmetric_eigen(data.sigma_x, "sample covariance");
  const double lmin = std::max(0.0, eig.eigenvalues().minCoeff());
  const double lmax = eig.eigenvalues().maxCoeff();
  const int d = data.dim();
  const double n = static_cast<double>(data.n());
  double L = (0.25 * n + data.alpha) * lmax;
  double m = data.alpha * lmin;
  bool degenerate = false;
  if (lmax <= 0.0) {
    // All covariates vanish: f is constant. Any positive L is a valid bound.
    L = 1.0;
    m = 0.0;
    degenerate = true;
  } else if (lmin <= 1e-12 * lmax) {
    m = 0.0;
    degenerate = true;
  }
  Target t("logistic", d, std::make_shared<LogisticModel>(data), m, L);
  if (degenerate) {
    t = t.with_warning("degenerate sample covariance: strong convexity parameter reported as 0");
  }
  const auto mode = theory::find_mode(t, 1e-10, 1000000);
  return t.with_mode(mode.x);
}

PreconditionedTarget precondition(const LogisticData& data) {
  const auto eig = symmetric_eigen(data.sigma_x, "sample covariance");
  const Vector& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 1e-12 * std::max(1.0, ev.maxCoeff()))) {
    throw InvalidInput("preconditioning needs a positive definite sample covariance");
  }
  const Matrix& V = eig.eigenvectors();
  const Matrix inv_sqrt = V * ev.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
  const Matrix sqrt = V * ev.cwiseSqrt().asDiagonal() * V.transpose();
  const double L = 0.25 * static_cast<double>(data.n()) + data.alpha;
  const double m = data.alpha;
  auto base = std::make_shared<LogisticModel>(data);
  Target t("logistic_preconditioned", data.dim(),
           std::make_shared<LinearPullbackModel>(std::move(base), inv_sqrt), m, L);
  const auto mode = theory::find_mode(t, 1e-10, 1000000);
  return PreconditionedTarget{t.with_mode(mode.x), inv_sqrt, sqrt};
}

Target regularize(const Target& target, double lambda, const Vector& center) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("regularization strength must be positive");
  }
  if (center.size() != target.dim()) throw InvalidInput("center has wrong dimension");
  auto model = std::make_shared<RegularizedModel>(target.model(), lambda, center);
  std::optional<Vector> mode;
  // The regularizer is minimized at `center`; if that is also the base mode
  // the minimizer of f̃ is unchanged.
  if (target.mode() && (*target.mode() - center).norm() == 0.0) mode = center;
  return Target(target.name() + "_regularized", target.dim(), std::move(model),
                target.m() + lambda, target.L() + lambda, std::move(mode));
}

GradCheckReport grad_check(const Target& target, std::span<const Vector> points, double step) {
  if (!(step > 0.0)) throw InvalidInput("finite-difference step must be positive");
  const int d = target.dim();
  GradCheckReport report;
  report.n_points = points.size();
  report.worst_lower_slack = std::numeric_limits<double>::infinity();
  report.worst_upper_slack = std::numeric_limits<double>::infinity();
  Vector g(d);
  Vector fd(d);
  for (const Vector& x : points) {
    if (x.size() != d) throw InvalidInput("grad_check point has wrong dimension");
    target.gradient(x, g);
    Vector xp = x;
    for (int i = 0; i < d; ++i) {
      xp[i] = x[i] + step;
      const double fp = target.value(xp);
      xp[i] = x[i] - step;
      const double fm = target.value(xp);
      xp[i] = x[i];
      fd[i] = (fp - fm) / (2.0 * step);
    }
    const double err = (fd - g).lpNorm<Eigen::Infinity>() / std::max(1.0, g.lpNorm<Eigen::Infinity>());
    report.max_relative_error = std::max(report.max_relative_error, err);
  }
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const Vector& x = points[k];
    const Vector& y = points[k + 1];
    const double fx = target.value_and_gradient(x, g);
    const double fy = target.value(y);
    const double gap = fy - fx - g.dot(y - x);
    const double dist2 = (x - y).squaredNorm();
    const double lower = gap - 0.5 * target.m() * dist2;
    const double upper = 0.5 * target.L() * dist2 - gap;
    const double tol = 1e-9 * (1.0 + std::abs(fx) + std::abs(fy));
    report.worst_lower_slack = std::min(report.worst_lower_slack, lower);
    report.worst_upper_slack = std::min(report.worst_upper_slack, upper);
    if (lower < -tol || upper < -tol) report.sandwich_ok = false;
    ++report.n_pairs;
  }
  if (report.n_pairs == 0) report.worst_lower_slack = report.worst_upper_slack = 0.0;
  return report;
}

}  // namespace lcmc
