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
#include <vector>

#include "lcmc/random.hpp"
#include "lcmc/samplers.hpp"

namespace lcmc {

/// B independent chains of one sampler advanced in lock-step, stored as a
/// d x B matrix so the target can be evaluated on the whole batch at once.
///
/// Chain c draws from Stream(derive_seed(seed, {first_chain + c})) in the
/// same order as run_chain, so any column reproduces the single-chain
/// trajectory for that seed. A chain whose iterate stops being finite is
/// frozen at its last finite state and flagged; it never throws.
class Ensemble {
 public:
  Ensemble(SamplerId sampler, Target target, double h, const InitialDistribution& init,
           std::size_t n_chains, std::uint64_t seed, const ChainOptions& options = {},
           std::size_t first_chain = 0);

  void step();
  void advance(std::size_t steps) {
    for (std::size_t k = 0; k < steps; ++k) step();
  }

  SamplerId sampler() const { return sampler_; }
  const Target& target() const { return target_; }
  double h() const { return h_; }
  std::size_t iteration() const { return iteration_; }
  std::size_t size() const { return static_cast<std::size_t>(X_.cols()); }

  const Matrix& states() const { return X_; }
  const std::vector<std::uint8_t>& diverged() const { return diverged_; }
  std::size_t n_diverged() const { return n_diverged_; }
  /// Accept flags of the most recent step (always 1 for ULA moves).
  const std::vector<std::uint8_t>& last_accepted() const { return last_accepted_; }
  /// Accepted moves per chain since construction.
  const std::vector<std::uint32_t>& accept_counts() const { return accept_counts_; }

  /// Projections a'x of the non-diverged chains.
  std::vector<double> project(ConstVectorRef direction) const;

 private:
  static constexpr Eigen::Index kBlock = 256;

  void mark_diverged(Eigen::Index c);

  SamplerId sampler_;
  Target target_;
  double h_;
  ChainOptions options_;
  std::size_t iteration_ = 0;
  std::vector<Stream> rngs_;
  Matrix X_, G_, Z_, GZ_, N_;
  Vector f_, fZ_;
  std::vector<double> u_;
  std::vector<std::uint8_t> hold_;
  std::vector<std::uint8_t> diverged_;
  std::vector<std::uint8_t> last_accepted_;
  std::vector<std::uint32_t> accept_counts_;
  std::size_t n_diverged_ = 0;
};

}  // namespace lcmc
