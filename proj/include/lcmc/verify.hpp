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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lcmc/sampler_id.hpp"
#include "lcmc/targets.hpp"

namespace lcmc::verify {

struct CheckResult {
  std::string name;
  double observed = 0.0;
  double bound = 0.0;
  bool passed = false;
  std::size_t n = 0;  // samples, pairs or grid nodes
  std::uint64_t seed = 0;
  std::string detail;
};

/// TV between N(μ₁, σ²I) and N(μ₂, σ²I): 2Φ(‖μ₁-μ₂‖/(2σ)) - 1.
double gaussian_tv_exact(ConstVectorRef mu1, ConstVectorRef mu2, double var);

/// KL between N(μ₁, σ²I) and N(μ₂, σ²I): ‖μ₁-μ₂‖²/(2σ²).
double gaussian_kl(ConstVectorRef mu1, ConstVectorRef mu2, double var);

using PointPair = std::pair<Vector, Vector>;

/// Pairs around the mode: half spread on the target's scale, half at
/// distance O(√h) where the proposal-TV bound is informative.
std::vector<PointPair> random_pairs(const Target& target, double h, std::size_t n, std::uint64_t seed);

/// TV(P_x, P_y) ≤ ‖x-y‖/√(2h) for the Langevin proposals P_x = N(x - h∇f(x), 2hI).
/// observed = max TV/bound ratio over pairs; requires 0 < h ≤ 2/L.
CheckResult check_proposal_tv_bound(const Target& target, double h, std::span<const PointPair> pairs);

/// Monte Carlo E_{z~P_x}[min(1, ratio)] at h = h̃(s, ε) for `n_points`
/// uniform points of the high-probability ball; every estimate must clear
/// 1 - ε/8 minus three standard errors. observed = smallest estimate.
CheckResult check_acceptance_floor(const Target& target, double s, double epsilon,
                                   std::size_t n_points, std::size_t n_mc, std::uint64_t seed);

/// Fraction of exact samples in B(x⋆, r(s)√(d/m)); passes iff it is at
/// least 1 - s - 3√(s/n).
CheckResult check_highprob_region(const Target& target, double s, std::size_t n_mc,
                                  std::uint64_t seed);

/// Monte Carlo E‖x - x⋆‖⁴ against d²ν²; passes iff the estimate is below
/// the bound plus three standard errors.
CheckResult check_fourth_moment(const Target& target, double nu, std::size_t n_mc,
                                std::uint64_t seed);

/// Quadrature discretization of a 1-D transition kernel.
struct DiscreteKernel {
  Vector nodes;
  Vector weights;  // composite Simpson
  Vector mu;       // π at the nodes times the weights, normalized
  Matrix Q;        // row-stochastic; the rejection atom sits on the diagonal
};

/// Q_ij = p(x_i, x_j)·α(x_i, x_j)·w_j for j ≠ i and Q_ii = 1 - Σ_{j≠i} Q_ij.
/// `log_proposal(i, j)` is log p(x_i, x_j); with `metropolize` false α ≡ 1.
DiscreteKernel discretize_kernel(const Vector& nodes, const Vector& weights, const Vector& f,
                                 const std::function<double(int, int)>& log_proposal,
                                 bool metropolize);

/// Composite Simpson nodes and weights on [lo, hi]; `intervals` must be even.
std::pair<Vector, Vector> simpson_grid(double lo, double hi, int intervals);

struct KernelReport {
  double stationarity_residual = 0.0;     // ‖μ'Q - μ'‖₁
  double detailed_balance_residual = 0.0;  // max |μ_i Q_ij - μ_j Q_ji|
  double uncovered_mass = 0.0;             // tail bound outside the grid
  int nodes = 0;
};

/// Symmetric grid [x⋆ - w, x⋆ + w] whose log-concave tail bound leaves
/// less than `max_tail` of the mass outside.
std::pair<double, double> kernel_grid_range(const Target& target, double max_tail = 1e-8);

/// Builds the discretized ULA, MALA or MRW kernel of a 1-D target and
/// measures stationarity and detailed balance. Throws InvalidInput when the
/// grid leaves more than 1e-6 of the mass uncovered.
KernelReport kernel_residuals_1d(const Target& target, SamplerId sampler, double h, double lo,
                                 double hi, int intervals = 400, bool lazy = false);

/// Pass/fail wrapper: both residuals below `tol`.
CheckResult kernel_stationarity_1d(const Target& target, SamplerId sampler, double h, double lo,
                                   double hi, int intervals = 400, double tol = 1e-3,
                                   bool lazy = false);

/// n exact draws from the mixture ½N(a, I) + ½N(-a, I), one per column.
Matrix exact_mixture_sampler(const Vector& a, std::uint64_t seed, std::size_t n);

/// The full property and kernel suite at default sizes.
std::vector<CheckResult> run_suite(std::uint64_t seed, unsigned threads = 0);

/// CSV with columns name, observed, bound, passed, n, seed, detail.
std::string results_csv(const std::vector<CheckResult>& results);

}  // namespace lcmc::verify
