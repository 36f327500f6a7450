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

#include <gtest/gtest.h>

#include "lcmc/ensemble.hpp"
#include "lcmc/error.hpp"
#include "lcmc/samplers.hpp"

namespace lcmc {
namespace {

// The default batch evaluation loops over columns, so ensemble chains must
// reproduce run_chain bit for bit.
TEST(Ensemble, MatchesRunChainBitwise) {
  const Target t = mixture_target(Vector::Constant(2, 0.5));
  const std::uint64_t seed = 1234;
  for (bool lazy : {false, true}) {
    for (SamplerId id : {SamplerId::ULA, SamplerId::MALA, SamplerId::MRW}) {
      ChainOptions opts;
      opts.lazy = lazy;
      Ensemble ens(id, t, 0.3, InitialDistribution::gaussian_at_mode(), 5, seed, opts);
      ens.advance(200);
      EXPECT_EQ(ens.iteration(), 200u);
      for (Eigen::Index c = 0; c < 5; ++c) {
        const auto traj = run_chain(id, t, InitialDistribution::gaussian_at_mode(), 0.3, 200,
                                    derive_seed(seed, {static_cast<std::uint64_t>(c)}), opts);
        EXPECT_EQ(ens.states().col(c), traj.states.col(200)) << to_string(id) << " lazy=" << lazy;
        std::uint32_t accepted = 0;
        for (auto a : traj.accepted) accepted += a;
        EXPECT_EQ(ens.accept_counts()[static_cast<std::size_t>(c)], accepted);
      }
    }
  }
}

TEST(Ensemble, FirstChainOffsetSelectsStreams) {
  const Target t = mixture_target(Vector::Constant(3, 0.4));
  Ensemble all(SamplerId::MALA, t, 0.2, InitialDistribution::gaussian_at_mode(), 8, 5);
  Ensemble tail(SamplerId::MALA, t, 0.2, InitialDistribution::gaussian_at_mode(), 3, 5, {}, 5);
  all.advance(50);
  tail.advance(50);
  EXPECT_EQ(all.states().rightCols(3), tail.states());
}

TEST(Ensemble, DivergedChainsAreFrozenAndSkipped) {
  const Target t = diagonal_gaussian_target(Vector::Ones(1));
  Ensemble ens(SamplerId::ULA, t, 5.0, InitialDistribution::gaussian_at_mode(), 4, 1);
  ens.advance(800);
  EXPECT_EQ(ens.n_diverged(), 4u);
  EXPECT_TRUE(ens.states().allFinite());
  EXPECT_TRUE(ens.project(Vector::Ones(1)).empty());
}

TEST(Ensemble, ProjectAndAcceptFlags) {
  const Target t = diagonal_gaussian_target(Vector::Ones(2));
  Ensemble ens(SamplerId::MRW, t, 0.1, InitialDistribution::gaussian_at_mode(), 10, 3);
  ens.step();
  const auto p = ens.project(Vector::Unit(2, 0));
  ASSERT_EQ(p.size(), 10u);
  for (std::size_t c = 0; c < 10; ++c) EXPECT_EQ(p[c], ens.states()(0, static_cast<Eigen::Index>(c)));
  std::uint32_t total = 0;
  for (std::size_t c = 0; c < 10; ++c) {
    EXPECT_EQ(ens.last_accepted()[c], ens.accept_counts()[c]);
    total += ens.accept_counts()[c];
  }
  EXPECT_GT(total, 0u);
  EXPECT_THROW(ens.project(Vector::Ones(3)), InvalidInput);
}

TEST(Ensemble, RejectsBadArguments) {
  const Target t = diagonal_gaussian_target(Vector::Ones(2));
  EXPECT_THROW(Ensemble(SamplerId::MALA, t, 0.0, InitialDistribution::gaussian_at_mode(), 3, 1), InvalidInput);
  EXPECT_THROW(Ensemble(SamplerId::MALA, t, 0.1, InitialDistribution::gaussian_at_mode(), 0, 1), InvalidInput);
}

}  // namespace
}  // namespace lcmc
