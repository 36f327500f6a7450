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

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lcmc/random.hpp"

namespace lcmc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<Vector>;
using ConstVectorRef = const Eigen::Ref<const Vector>&;

/// Negative log-density f of a target pi proportional to exp(-f).
/// Normalizing constants never appear; every sampler only needs f-differences.
class NegLogDensity {
 public:
  virtual ~NegLogDensity() = default;
  virtual double value(ConstVectorRef x) const = 0;
  virtual void gradient(ConstVectorRef x, VectorRef grad) const = 0;
  virtual double value_and_gradient(ConstVectorRef x, VectorRef grad) const {
    gradient(x, grad);
    return value(x);
  }

  // Column-wise evaluation over a d x B batch of points. The defaults loop
  // over columns; models with cheap closed forms override them.
  virtual void value_batch(const Matrix& X, VectorRef f) const {
    for (Eigen::Index j = 0; j < X.cols(); ++j) f[j] = value(X.col(j));
  }
  virtual void value_and_gradient_batch(const Matrix& X, VectorRef f, Matrix& G) const {
    for (Eigen::Index j = 0; j < X.cols(); ++j) f[j] = value_and_gradient(X.col(j), G.col(j));
  }
};

/// Draws one exact sample from the target into `out`.
using ExactSampler = std::function<void(Stream&, VectorRef)>;

/// A log-concave target: f, its gradient, and the convexity metadata (m, L)
/// every step-size rule consumes. Immutable; copies share the model.
class Target {
 public:
  Target(std::string name, int dim, std::shared_ptr<const NegLogDensity> model, double m,
         double L, std::optional<Vector> mode = std::nullopt, ExactSampler exact = {});

  /// Wraps plain callables; (m, L) are caller-declared.
  static Target from_functions(std::string name, int dim, std::function<double(const Vector&)> f,
                               std::function<Vector(const Vector&)> grad, double m, double L,
                               std::optional<Vector> mode = std::nullopt);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  double m() const { return m_; }
  double L() const { return L_; }
  /// L/m, or +inf for weakly log-concave targets.
  double kappa() const;
  const std::optional<Vector>& mode() const { return mode_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  double value(ConstVectorRef x) const { return model_->value(x); }
  void gradient(ConstVectorRef x, VectorRef grad) const { model_->gradient(x, grad); }
  Vector gradient(ConstVectorRef x) const;
  double value_and_gradient(ConstVectorRef x, VectorRef grad) const {
    return model_->value_and_gradient(x, grad);
  }

  void value_batch(const Matrix& X, VectorRef f) const { model_->value_batch(X, f); }
  void value_and_gradient_batch(const Matrix& X, VectorRef f, Matrix& G) const {
    model_->value_and_gradient_batch(X, f, G);
  }

  bool has_exact_sampler() const { return static_cast<bool>(exact_); }
  /// Throws Unsupported when no exact sampler is attached.
  void sample_exact(Stream& rng, VectorRef out) const;
  Vector sample_exact(Stream& rng) const;

  const std::shared_ptr<const NegLogDensity>& model() const { return model_; }

  Target with_mode(Vector mode) const;
  Target with_warning(std::string warning) const;

 private:
  std::string name_;
  int dim_;
  std::shared_ptr<const NegLogDensity> model_;
  double m_;
  double L_;
  std::optional<Vector> mode_;
  ExactSampler exact_;
  std::vector<std::string> warnings_;
};

/// pi(x) ∝ exp(-x'Σ⁻¹x/2). m = 1/λmax(Σ), L = 1/λmin(Σ), mode 0.
/// Diagonal Σ takes an O(d) fast path.
Target gaussian_target(const Matrix& sigma);
Target diagonal_gaussian_target(const Vector& variances);

/// Equal-weight mixture of N(a, I) and N(-a, I); requires ‖a‖ < 1.
Target mixture_target(const Vector& a);

/// Exact draws from the two-component mixture, one sample per column.
Matrix exact_mixture_samples(const Vector& a, std::uint64_t seed, std::size_t n);

/// Covariates, binary responses and prior strength for Bayesian logistic
/// regression with a Gaussian prior shaped by the sample covariance.
struct LogisticData {
  Matrix X;        // n x d
  Vector Y;        // n, entries in {0, 1}
  double alpha = 1.0;
  Matrix sigma_x;  // (1/n) X'X

  int n() const { return static_cast<int>(X.rows()); }
  int dim() const { return static_cast<int>(X.cols()); }

  static LogisticData make(Matrix X, Vector Y, double alpha);

  /// Rademacher covariates rescaled to Euclidean norm `x_norm`, responses
  /// from the logistic model at `theta_star`.
  static LogisticData synthetic(int n, int d, double alpha, const Vector& theta_star,
                                double x_norm, std::uint64_t seed);

  /// CSV with a header line and rows x_1..x_d, y.
  static LogisticData from_csv(const std::string& path, double alpha);
};

/// f(θ) = -Y'Xθ + Σ log(1 + exp(θ'x_i)) + (α/2)‖Σ_X^{1/2} θ‖².
/// L = (n/4 + α) λmax(Σ_X), m = α λmin(Σ_X); the mode is found by gradient descent.
Target logistic_posterior(const LogisticData& data);

/// Target for g(θ') = f(Σ_X^{-1/2} θ') together with the map that takes
/// samples of π_g back to samples of π.
struct PreconditionedTarget {
  Target target;
  Matrix to_original_map;  // Σ_X^{-1/2}
  Matrix from_original_map;  // Σ_X^{1/2}

  Vector to_original(ConstVectorRef theta_prime) const { return to_original_map * theta_prime; }
};

PreconditionedTarget precondition(const LogisticData& data);

/// f̃(x) = f(x) + (λ/2)‖x - center‖². The Hessian shifts by exactly λI, so
/// m̃ = m + λ and L̃ = L + λ.
Target regularize(const Target& target, double lambda, const Vector& center);

struct GradCheckReport {
  double max_relative_error = 0.0;  // ‖g_fd - g‖∞ / max(1, ‖g‖∞)
  double worst_lower_slack = 0.0;   // min over pairs of gap - m/2‖x-y‖² (≥ 0 when valid)
  double worst_upper_slack = 0.0;   // min over pairs of L/2‖x-y‖² - gap (≥ 0 when valid)
  bool sandwich_ok = true;
  std::size_t n_points = 0;
  std::size_t n_pairs = 0;
};

/// Central finite differences at each point, plus the Bregman sandwich
/// m/2‖x-y‖² ≤ f(y) - f(x) - ∇f(x)'(y-x) ≤ L/2‖x-y‖² on consecutive pairs.
GradCheckReport grad_check(const Target& target, std::span<const Vector> points, double step);

}  // namespace lcmc
