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
#include <initializer_list>
#include <limits>

#include <Eigen/Core>

namespace lcmc {

/// Counter-based random stream (SplitMix64 output function applied to a
/// Weyl sequence). Eight bytes of state, so one stream per chain is cheap
/// even for ensembles of 10^5 chains, and any (seed, index) pair maps to an
/// independent stream without sequential skipping.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key = 0) : key_(key), counter_(0) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform draw on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal draw (Boost ziggurat).
  double normal();

  void fill_normal(Eigen::Ref<Eigen::VectorXd> out);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Mixes a master seed with a path of indices (run, chain, ...) into a
/// stream key. Distinct paths give unrelated keys.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace lcmc
