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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lcmc/error.hpp"
#include "lcmc/targets.hpp"
#include "lcmc/theory.hpp"
#include "lcmc/verify.hpp"

namespace lcmc::verify {
namespace {

// ½∫|φ(x) - φ(x - shift)| dx by composite Simpson on a wide grid.
long double tv_by_quadrature(long double shift) {
  const int n = 200000;
  const long double lo = -20.0L, hi = 20.0L + shift, dx = (hi - lo) / n;
  long double sum = 0.0L;
  for (int i = 0; i <= n; ++i) {
    const long double x = lo + dx * i;
    const long double a = std::exp(-x * x / 2.0L), b = std::exp(-(x - shift) * (x - shift) / 2.0L);
    const long double wgt = (i == 0 || i == n) ? 1.0L : (i % 2 ? 4.0L : 2.0L);
    sum += wgt * std::fabs(a - b);
  }
  return 0.5L * sum * dx / 3.0L / std::sqrt(2.0L * std::numbers::pi_v<long double>);
}

TEST(GaussianTv, MatchesQuadrature) {
  Vector a = Vector::Zero(2), b(2);
  b << 2.0, 0.0;
  const double tv = gaussian_tv_exact(a, b, 1.0);
  EXPECT_NEAR(tv, 0.682689492137086, 1e-12);
  EXPECT_NEAR(tv, static_cast<double>(tv_by_quadrature(2.0L)), 1e-9);
  // Scaling: shift 1 at variance 1/4 is the same as shift 2 at variance 1.
  b << 0.6, 0.8;
  EXPECT_NEAR(gaussian_tv_exact(a, b, 0.25), tv, 1e-12);
  EXPECT_DOUBLE_EQ(gaussian_tv_exact(a, a, 3.0), 0.0);
}

TEST(GaussianTv, PinskerHolds) {
  Vector a = Vector::Zero(3);
  for (double s : {0.01, 0.3, 1.0, 3.0, 10.0}) {
    Vector b = Vector::Constant(3, s);
    const double tv = gaussian_tv_exact(a, b, 0.7);
    const double kl = gaussian_kl(a, b, 0.7);
    EXPECT_NEAR(kl, b.squaredNorm() / 1.4, 1e-12);
    EXPECT_LE(tv, std::sqrt(kl / 2.0) + 1e-15);
  }
}

TEST(Checks, ProposalTvBoundHolds) {
  Vector a(3);
  a << 0.6, 0.3, -0.3;
  const auto t = mixture_target(a);
  const double h = 0.5 / t.L();
  const auto pairs = random_pairs(t, h, 500, 3);
  ASSERT_EQ(pairs.size(), 500u);
  const auto res = check_proposal_tv_bound(t, h, pairs);
  EXPECT_TRUE(res.passed) << res.detail;
  EXPECT_LE(res.observed, 1.0);
  EXPECT_THROW(check_proposal_tv_bound(t, 3.0 / t.L(), pairs), InvalidInput);
}

TEST(Checks, AcceptanceFloorOnGaussian) {
  Vector var(4);
  var << 1.0, 0.8, 0.5, 0.25;
  const auto t = diagonal_gaussian_target(var);
  const auto res = check_acceptance_floor(t, 0.1, 0.5, 20, 400, 5);
  EXPECT_TRUE(res.passed) << res.detail;
  EXPECT_NEAR(res.bound, 1.0 - 0.5 / 8.0, 1e-15);
  EXPECT_EQ(res.n, 8000u);
}

TEST(Checks, HighProbabilityRegion) {
  Vector var = Vector::Constant(5, 0.5);
  const auto res = check_highprob_region(diagonal_gaussian_target(var), 0.05, 20000, 9);
  EXPECT_TRUE(res.passed) << res.observed;
  EXPECT_GE(res.observed, 0.95 - 0.01);
}

TEST(Checks, FourthMomentOnMixture) {
  Vector a(3);
  a << 0.5, 0.5, 0.0;
  // E‖x‖⁴ = d² + 2d + ‖a‖⁴ + (2d + 4)‖a‖² = 20.25 here.
  const auto res = check_fourth_moment(mixture_target(a), 2.0, 20000, 4);
  EXPECT_TRUE(res.passed) << res.observed << " > " << res.bound;
  EXPECT_NEAR(res.observed, 20.25, 0.6);
  EXPECT_FALSE(check_fourth_moment(mixture_target(a), 1.0, 20000, 4).passed);
}

TEST(Kernel, SimpsonGridIntegratesCubicsExactly) {
  const auto [x, wts] = simpson_grid(-1.0, 2.0, 6);
  EXPECT_EQ(x.size(), 7);
  EXPECT_NEAR((wts.array() * x.array().cube()).sum(), (16.0 - 1.0) / 4.0, 1e-13);
  EXPECT_NEAR(wts.sum(), 3.0, 1e-14);
  EXPECT_THROW(simpson_grid(0.0, 1.0, 5), InvalidInput);
  EXPECT_THROW(simpson_grid(1.0, 0.0, 4), InvalidInput);
}

TEST(Kernel, SymmetricUniformGridIsDoublyStochastic) {
  // A symmetric proposal on uniform weights with flat f gives a symmetric
  // row-stochastic matrix, hence doubly stochastic with uniform μ.
  const int n = 9;
  Vector nodes = Vector::LinSpaced(n, 0.0, 1.0);
  Vector w = Vector::Constant(n, 1.0 / n);
  Vector f = Vector::Zero(n);
  const auto k = discretize_kernel(
      nodes, w, f, [&](int i, int j) { return -std::abs(nodes[i] - nodes[j]); }, true);
  for (int i = 0; i < n; ++i) {
    EXPECT_NEAR(k.Q.row(i).sum(), 1.0, 1e-14);
    EXPECT_NEAR(k.Q.col(i).sum(), 1.0, 1e-14);
    EXPECT_GE(k.Q(i, i), 0.0);
  }
  EXPECT_NEAR(k.mu[3], 1.0 / n, 1e-15);
}

TEST(Kernel, MetropolizedKernelsAreStationary) {
  Vector var(1);
  var << 1.0;
  const auto t = diagonal_gaussian_target(var);
  const auto [lo, hi] = kernel_grid_range(t);
  for (SamplerId s : {SamplerId::MALA, SamplerId::MRW}) {
    const auto rep = kernel_residuals_1d(t, s, 0.5, lo, hi);
    EXPECT_LT(rep.stationarity_residual, 1e-10);
    EXPECT_LT(rep.detailed_balance_residual, 1e-12);
    EXPECT_LT(rep.uncovered_mass, 1e-8);
    EXPECT_EQ(rep.nodes, 401);
  }
}

TEST(Kernel, UlaIsBiased) {
  Vector a(1);
  a << std::sqrt(0.5);
  const auto t = mixture_target(a);
  const auto [lo, hi] = kernel_grid_range(t);
  const auto ula = kernel_stationarity_1d(t, SamplerId::ULA, 0.5, lo, hi);
  const auto mala = kernel_stationarity_1d(t, SamplerId::MALA, 0.5, lo, hi);
  EXPECT_FALSE(ula.passed);
  EXPECT_TRUE(mala.passed);
  EXPECT_GT(ula.observed, 100.0 * mala.observed);
}

TEST(Kernel, RejectsMultivariateTargets) {
  const auto t = diagonal_gaussian_target(Vector::Ones(2));
  EXPECT_THROW(kernel_grid_range(t), InvalidInput);
}

TEST(Suite, AllChecksPassAndCsvHasOneRowEach) {
  const auto results = run_suite(2026);
  ASSERT_FALSE(results.empty());
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << " " << r.detail;
  const auto csv = results_csv(results);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), results.size() + 1);
  EXPECT_EQ(csv.rfind("name,observed,bound,passed,n,seed,detail", 0), 0u);
}

}  // namespace
}  // namespace lcmc::verify
