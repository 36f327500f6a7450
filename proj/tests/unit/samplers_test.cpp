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
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "lcmc/diagnostics.hpp"
#include "lcmc/error.hpp"
#include "lcmc/samplers.hpp"
#include "lcmc/theory.hpp"

namespace lcmc {
namespace {

Target standard_gaussian(int d) { return diagonal_gaussian_target(Vector::Ones(d)); }

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(Ula, ZeroNoiseContraction) {
  const Target t = standard_gaussian(2);
  ChainState s = ChainState::at(t, vec({1.0, 0.0}));
  const auto r = ula_step(s, t, 0.1, Vector::Zero(2));
  EXPECT_TRUE(r.accepted);
  EXPECT_NEAR(s.x[0], 0.9, 1e-15);
  EXPECT_EQ(s.x[1], 0.0);
  EXPECT_EQ(s.step_index, 1u);
}

TEST(Ula, RejectsNonPositiveStep) {
  const Target t = standard_gaussian(1);
  ChainState s = ChainState::at(t, vec({1.0}));
  EXPECT_THROW(ula_step(s, t, 0.0, vec({0.3})), InvalidInput);
}

TEST(Ula, StationaryVarianceOfAr1) {
  // For f = ½x², x' = (1-h)x + √(2h)ξ has stationary variance 2h / (1 - (1-h)²).
  const double h = 0.25;
  const Target t = standard_gaussian(1);
  const auto traj = run_chain(SamplerId::ULA, t, InitialDistribution::point_mass(vec({0.0})), h, 400000, 5);
  const Eigen::ArrayXd x = traj.states.row(0).tail(399000).transpose().array();
  const double var = (x - x.mean()).square().mean();
  const double expected = 2.0 * h / (1.0 - (1.0 - h) * (1.0 - h));
  // AR(1) with ρ = 0.75: effective sample size ≈ n(1-ρ)/(1+ρ).
  const double n_eff = static_cast<double>(x.size()) * 0.25 / 1.75;
  EXPECT_NEAR(var, expected, 5.0 * expected * std::sqrt(2.0 / n_eff));
  EXPECT_GT(expected, 1.1);  // the ULA bias is visible at this step size
}

TEST(MalaPropose, DriftAndNoise) {
  const Target t = standard_gaussian(1);
  EXPECT_NEAR(mala_propose(ChainState::at(t, vec({1.0})), 0.1, vec({0.0}))[0], 0.9, 1e-15);
  const Target g2 = diagonal_gaussian_target(vec({4.0, 1.0}));
  const Vector x = vec({0.3, -1.2});
  const ChainState s = ChainState::at(g2, x);
  const Vector z = mala_propose(s, 0.25, vec({1.0, -1.0}));
  const Vector expected = x - 0.25 * g2.gradient(x) + vec({std::sqrt(0.5), -std::sqrt(0.5)});
  EXPECT_LT((z - expected).norm(), 1e-15);
  // The mode is a fixed point of the drift.
  EXPECT_EQ(mala_propose(ChainState::at(g2, Vector::Zero(2)), 0.25, Vector::Zero(2)).norm(), 0.0);
}

TEST(MalaRatio, HandExample) {
  // f = ½x², x = 1, z = 0.9, h = 0.1.
  const Target t = standard_gaussian(1);
  const double lr = mala_log_accept_ratio(vec({1.0}), vec({0.9}), t, 0.1);
  // Independent evaluation: log π(z) q(z→x) - log π(x) q(x→z),
  // q(a→b) ∝ exp(-‖b - a + h a‖² / (4h)).
  const long double h = 0.1L, x = 1.0L, z = 0.9L;
  const long double oracle = (-0.5L * z * z - (x - z + h * z) * (x - z + h * z) / (4 * h)) -
                             (-0.5L * x * x - (z - x + h * x) * (z - x + h * x) / (4 * h));
  EXPECT_NEAR(lr, static_cast<double>(oracle), 1e-15);
  EXPECT_NEAR(lr, 0.00475, 1e-15);
}

TEST(MalaRatio, IdentityAndAntisymmetry) {
  const Target t = mixture_target(vec({0.5, 0.5}));
  const Vector x = vec({0.4, -1.3});
  const Vector z = vec({-0.2, 0.7});
  EXPECT_EQ(mala_log_accept_ratio(x, x, t, 0.3), 0.0);
  EXPECT_NEAR(mala_log_accept_ratio(x, z, t, 0.3), -mala_log_accept_ratio(z, x, t, 0.3), 1e-14);
  const Vector gx = t.gradient(x), gz = t.gradient(z);
  EXPECT_DOUBLE_EQ(mala_log_accept_ratio(x, t.value(x), gx, z, t.value(z), gz, 0.3),
                   mala_log_accept_ratio(x, z, t, 0.3));
}

TEST(MhAccept, Thresholds) {
  EXPECT_TRUE(mh_accept(0.0, 0.999999));
  EXPECT_TRUE(mh_accept(3.0, 0.999999));
  EXPECT_FALSE(mh_accept(-std::numeric_limits<double>::infinity(), 1e-300));
  EXPECT_FALSE(mh_accept(std::numeric_limits<double>::quiet_NaN(), 0.1));
  const double e1 = std::exp(-1.0);
  EXPECT_TRUE(mh_accept(-1.0, e1 - 1e-9));
  EXPECT_FALSE(mh_accept(-1.0, e1 + 1e-9));
}

TEST(Mrw, AcceptanceThreshold) {
  // f(z) - f(x) = log 2 → accept iff u ≤ ½.
  const double shift = std::sqrt(2.0 * std::log(2.0));
  const Target t = standard_gaussian(1);
  const double h = 0.5;  // √(2h) = 1, so z = x + ξ
  for (double u : {0.49, 0.51}) {
    ChainState s = ChainState::at(t, vec({0.0}), false);
    const auto r = mrw_step(s, t, h, vec({shift}), u);
    EXPECT_NEAR(r.log_ratio, -std::log(2.0), 1e-14);
    EXPECT_EQ(r.accepted, u < 0.5);
    EXPECT_EQ(s.x[0], r.accepted ? shift : 0.0);
  }
}

TEST(Mrw, ZeroNoiseAlwaysAccepted) {
  const Target t = standard_gaussian(3);
  ChainState s = ChainState::at(t, vec({1.0, 2.0, 3.0}), false);
  const Vector before = s.x;
  EXPECT_TRUE(mrw_step(s, t, 0.3, Vector::Zero(3), 0.999).accepted);
  EXPECT_EQ(s.x, before);
}

TEST(Mrw, RatioIsDensityRatio) {
  const Target t = mixture_target(vec({0.5, 0.5}));
  Stream rng(4);
  for (int i = 0; i < 50; ++i) {
    Vector x(2), xi(2);
    rng.fill_normal(x);
    rng.fill_normal(xi);
    ChainState s = ChainState::at(t, x, false);
    const double u = rng.uniform();
    const Vector z = x + std::sqrt(2.0 * 0.2) * xi;
    const bool expected = mh_accept(t.value(x) - t.value(z), u);
    EXPECT_EQ(mrw_step(s, t, 0.2, xi, u).accepted, expected);
  }
}

TEST(Mala, RejectionLeavesStateUnchanged) {
  const Target t = standard_gaussian(2);
  ChainState s = ChainState::at(t, vec({0.1, 0.2}));
  const ChainState before = s;
  // Huge step: the proposal is far out, ratio is very negative; u near 1 rejects.
  const auto r = mala_step(s, t, 50.0, vec({3.0, -3.0}), 0.999999);
  ASSERT_FALSE(r.accepted);
  EXPECT_EQ(s.x, before.x);
  EXPECT_EQ(s.f_x, before.f_x);
  EXPECT_EQ(s.grad_x, before.grad_x);
}

TEST(Mala, InfiniteEnergyProposalIsRejected) {
  const Target wall = Target::from_functions(
      "half_line", 1,
      [](const Vector& x) { return x[0] < 0.0 ? std::numeric_limits<double>::infinity() : 0.5 * x[0] * x[0]; },
      [](const Vector& x) -> Vector { return x; }, 1.0, 1.0);
  ChainState s = ChainState::at(wall, vec({0.5}));
  EXPECT_FALSE(mala_step(s, wall, 0.5, vec({-5.0}), 0.0).accepted);
  EXPECT_EQ(s.x[0], 0.5);
}

TEST(Chain, DivergenceCarriesContext) {
  // ULA with h far above 2/L blows up geometrically.
  const Target t = standard_gaussian(1);
  try {
    run_chain(SamplerId::ULA, t, InitialDistribution::point_mass(vec({1.0})), 5.0, 2000, 1);
    FAIL() << "expected divergence";
  } catch (const ChainDivergence& e) {
    EXPECT_GT(e.step(), 0u);
    EXPECT_EQ(e.state().size(), 1);
  }
}

TEST(Chain, ZeroStepsKeepsInitialState) {
  const Target t = standard_gaussian(2);
  const auto traj = run_chain(SamplerId::MALA, t, InitialDistribution::point_mass(vec({1.0, 2.0})), 0.1, 0, 3);
  EXPECT_EQ(traj.states.cols(), 1);
  EXPECT_EQ(traj.steps(), 0u);
  EXPECT_EQ(traj.states.col(0), vec({1.0, 2.0}));
}

TEST(Chain, SameSeedIdenticalTrajectories) {
  const Target t = mixture_target(vec({0.5, 0.5}));
  for (SamplerId id : {SamplerId::ULA, SamplerId::MALA, SamplerId::MRW}) {
    const auto a = run_chain(id, t, InitialDistribution::gaussian_at_mode(), 0.2, 300, 99);
    const auto b = run_chain(id, t, InitialDistribution::gaussian_at_mode(), 0.2, 300, 99);
    const auto c = run_chain(id, t, InitialDistribution::gaussian_at_mode(), 0.2, 300, 100);
    EXPECT_EQ(a.states, b.states);
    EXPECT_EQ(a.accepted, b.accepted);
    EXPECT_NE(a.states, c.states);
  }
}

TEST(Chain, MalaMeanWithinCltBand) {
  const Target t = standard_gaussian(2);
  const double h = theory::practical_step_size(SamplerId::MALA, 2, 1.0, 1.0, 0.1);
  const auto traj = run_chain(SamplerId::MALA, t, InitialDistribution::gaussian_at_mode(), h, 10000, 8);
  for (int j = 0; j < 2; ++j) {
    std::vector<double> x(static_cast<std::size_t>(traj.states.cols()));
    for (Eigen::Index k = 0; k < traj.states.cols(); ++k) x[static_cast<std::size_t>(k)] = traj.states(j, k);
    const double ess = diagnostics::effective_sample_size(x, 200);
    double mean = 0.0, sq = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    for (double v : x) sq += (v - mean) * (v - mean);
    const double sd = std::sqrt(sq / static_cast<double>(x.size() - 1));
    EXPECT_LT(std::abs(mean), 3.0 * sd / std::sqrt(ess));
  }
}

TEST(Chain, LazyHoldsAboutHalfTheTime) {
  const Target t = standard_gaussian(1);
  ChainOptions opts;
  opts.lazy = true;
  const auto traj = run_chain(SamplerId::ULA, t, InitialDistribution::gaussian_at_mode(), 0.1, 20000, 2, opts);
  double moved = 0.0;
  for (auto a : traj.accepted) moved += a;
  EXPECT_NEAR(moved / 20000.0, 0.5, 4.0 * 0.5 / std::sqrt(20000.0));
}

TEST(Chain, RecordsProposals) {
  const Target t = standard_gaussian(2);
  ChainOptions opts;
  opts.record_proposals = true;
  const auto traj = run_chain(SamplerId::MRW, t, InitialDistribution::gaussian_at_mode(), 0.5, 100, 2, opts);
  ASSERT_EQ(traj.proposals.cols(), 100);
  for (std::size_t k = 0; k < 100; ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    if (traj.accepted[k]) {
      EXPECT_EQ(traj.states.col(col + 1), traj.proposals.col(col));
    } else {
      EXPECT_EQ(traj.states.col(col + 1), traj.states.col(col));
    }
  }
}

TEST(Chain, CsvLayout) {
  const Target t = standard_gaussian(2);
  const auto traj = run_chain(SamplerId::MALA, t, InitialDistribution::gaussian_at_mode(), 0.3, 3, 2);
  const std::string csv = traj.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,x_1,x_2,accepted");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(InitialDistribution, Variances) {
  const Target t4 = diagonal_gaussian_target(Vector::Constant(1, 0.25));  // L = 4
  const auto init = InitialDistribution::gaussian_at_mode();
  Stream rng(5);
  const int n = 200000;
  double sq = 0.0;
  Vector x(1);
  for (int i = 0; i < n; ++i) {
    sample_initial(init, t4, rng, x);
    sq += x[0] * x[0];
  }
  EXPECT_NEAR(sq / n, 0.25, 5.0 * 0.25 * std::sqrt(2.0 / n));

  const auto inexact = InitialDistribution::gaussian_inexact(Vector::Zero(1), 2.0);
  sq = 0.0;
  for (int i = 0; i < n; ++i) {
    sample_initial(inexact, t4, rng, x);
    sq += x[0] * x[0];
  }
  EXPECT_NEAR(sq / n, 0.25, 5.0 * 0.25 * std::sqrt(2.0 / n));
}

TEST(InitialDistribution, PointMassAndErrors) {
  const Target t = standard_gaussian(2);
  EXPECT_EQ(sample_initial(InitialDistribution::point_mass(vec({3.0, 4.0})), t, 1), vec({3.0, 4.0}));
  EXPECT_THROW(sample_initial(InitialDistribution::point_mass(vec({3.0})), t, 1), InvalidInput);
  const Target no_mode = Target::from_functions(
      "f", 1, [](const Vector& x) { return 0.5 * x.squaredNorm(); }, [](const Vector& x) -> Vector { return x; },
      1.0, 1.0);
  EXPECT_THROW(sample_initial(InitialDistribution::gaussian_at_mode(), no_mode, 1), InvalidInput);
}

TEST(SamplerId, ParseAndPrint) {
  EXPECT_EQ(parse_sampler("mala"), SamplerId::MALA);
  EXPECT_EQ(parse_sampler("ULA"), SamplerId::ULA);
  EXPECT_EQ(parse_sampler("RWMH"), SamplerId::MRW);
  EXPECT_EQ(to_string(SamplerId::MRW), "MRW");
  EXPECT_THROW(parse_sampler("hmc"), InvalidInput);
}

}  // namespace
}  // namespace lcmc
