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

#include "lcmc/random.hpp"

#include <boost/random/normal_distribution.hpp>

namespace lcmc {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Stream::result_type Stream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Stream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Stream::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(*this);
}

void Stream::fill_normal(Eigen::Ref<Eigen::VectorXd> out) {
  boost::random::normal_distribution<double> dist;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = dist(*this);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t p : path) h = mix64(h ^ mix64(p + kGolden));
  return h;
}

}  // namespace lcmc
