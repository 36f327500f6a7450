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

#include <cstddef>
#include <string>
#include <utility>

#include "lcmc/sampler_id.hpp"
#include "lcmc/targets.hpp"

namespace lcmc::theory {

/// Problem and tuning parameters feeding the step-size and mixing-time
/// formulas. `c` scales step sizes, `c_prime` scales iteration counts;
/// neither constant is pinned down by the analysis, so both default to 1.
struct TheoryParams {
  int d = 1;
  double m = 1.0;
  double L = 1.0;
  double delta = 0.1;
  double beta = 1.0;
  double s = 0.25;
  double epsilon = 0.5;
  double nu = 1.0;
  double c = 1.0;
  double c_prime = 1.0;

  double kappa() const { return L / m; }
};

struct BoundReport {
  std::string formula_id;
  double step_size = 0.0;
  double mixing_steps = 0.0;
  TheoryParams inputs;
};

/// r(s) = 2 + 2 max{(log(1/s)/d)^{1/4}, (log(1/s)/d)^{1/2}}, s ∈ (0, 1/2).
double r(double s, int d);

/// min{√m / (r(s) L √(dL)), 1/(Ld)}; requires m > 0.
double w(double s, double m, double L, int d);

/// 1 + 2√log(16/ε) + 2 log(16/ε), ε ∈ (0, 1).
double alpha_eps(double epsilon);

/// Largest step for which the accept-reject step is controlled inside the
/// high-probability ball: the three-branch minimum.
double h_tilde(double s, double epsilon, double m, double L, int d);

/// The three branches of h_tilde, in order.
struct HTildeBranches {
  double curvature;
  double dimension;
  double mixed;
};
HTildeBranches h_tilde_branches(double s, double epsilon, double m, double L, int d);

/// (1/(Ld)) min{√s / (r(s)√(νL)), 1} for weakly log-concave targets.
double w_lc(double s, double L, int d, double nu);

/// Warm-start MALA: h = c·w(δ/2β), k = c'·log(2β/δ)·max{dκ, √d κ^{3/2} r(δ/2β)}.
BoundReport mala_mixing_bound(const TheoryParams& p);

/// Warm-start MRW: h = c·m/(dL² r(δ/2β)), k = c'·dκ² r(δ/2β) log(2β/δ).
BoundReport mrw_mixing_bound(const TheoryParams& p);

/// Warmness of N(x*, L⁻¹I): κ^{d/2}.
double warmness_at_mode(double kappa, int d);

/// Warmness of N(x̃, (2L̃)⁻¹I) with ‖x̃ - x*‖ ≤ eps_mode and L̃ ≥ L.
double warmness_inexact(double kappa, int d, double L, double L_tilde, double eps_mode);

/// Start from N(x*, L⁻¹I): {MALA, MRW} reports with β = κ^{d/2}.
std::pair<BoundReport, BoundReport> feasible_start_bounds(const TheoryParams& p);

/// MALA from N(x̃, (2L̃)⁻¹I): step c·w(δ/2β̃) and the iteration bound with the
/// additive ε² penalty.
BoundReport inexact_start_bound(const TheoryParams& p, double L_tilde, double eps_mode);

struct WeaklyPlan {
  double lambda = 0.0;
  double kappa_tilde = 0.0;             // 1 + Ldν/δ
  double kappa_tilde_simplified = 0.0;  // Ldν/δ, used inside the bound
  BoundReport report;
};

/// Regularize with λ = 2δ/(dν), then run MALA with step c·w_lc(δ/2β).
WeaklyPlan weakly_logconcave_plan(const TheoryParams& p);

/// Step sizes used in the experiments:
///   ULA δ²/(dκL), MALA (1/L) min{1/√(dκ), 1/d}, MRW 1/(dκL).
double practical_step_size(SamplerId sampler, int d, double kappa, double L, double delta);

struct ModeResult {
  Vector x;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
};

/// Gradient descent with fixed step 1/L until ‖∇f‖ ≤ tol.
/// Throws NonConvergence carrying the last iterate.
ModeResult find_mode(const Target& target, double tol, std::size_t max_iters,
                     const std::optional<Vector>& start = std::nullopt);

/// Radius r(s)·√(d/m) of the ball around the mode holding ≥ 1 - s of the mass.
double r_ball_radius(double s, double m, int d);

/// Largest c with c·w(s) ≤ h̃(s, 1/2) over a grid of (s, m, L, d) values.
double step_constant_grid_search();

}  // namespace lcmc::theory
