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

#include "lcmc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "lcmc/error.hpp"

namespace lcmc {

Ensemble::Ensemble(SamplerId sampler, Target target, double h, const InitialDistribution& init,
                   std::size_t n_chains, std::uint64_t seed, const ChainOptions& options,
                   std::size_t first_chain)
    : sampler_(sampler), target_(std::move(target)), h_(h), options_(options) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("step size must be positive and finite");
  if (n_chains == 0) throw InvalidInput("ensemble needs at least one chain");
  if (options.record_proposals) throw InvalidInput("ensembles do not record proposals");
  const Eigen::Index d = target_.dim();
  const auto B = static_cast<Eigen::Index>(n_chains);
  X_.resize(d, B);
  f_.resize(B);
  fZ_.resize(std::min(kBlock, B));
  if (sampler_ != SamplerId::MRW) G_.resize(d, B);
  u_.assign(n_chains, 0.0);
  hold_.assign(n_chains, 0);
  diverged_.assign(n_chains, 0);
  last_accepted_.assign(n_chains, 0);
  accept_counts_.assign(n_chains, 0);
  rngs_.reserve(n_chains);
  for (std::size_t c = 0; c < n_chains; ++c) {
    rngs_.emplace_back(derive_seed(seed, {first_chain + c}));
    sample_initial(init, target_, rngs_.back(), X_.col(static_cast<Eigen::Index>(c)));
  }
  if (sampler_ == SamplerId::MRW) {
    target_.value_batch(X_, f_);
  } else {
    target_.value_and_gradient_batch(X_, f_, G_);
  }
  for (Eigen::Index c = 0; c < B; ++c) {
    const bool ok = std::isfinite(f_[c]) && X_.col(c).allFinite() &&
                    (sampler_ == SamplerId::MRW || G_.col(c).allFinite());
    if (!ok) mark_diverged(c);
  }
}

void Ensemble::mark_diverged(Eigen::Index c) {
  auto& flag = diverged_[static_cast<std::size_t>(c)];
  if (!flag) {
    flag = 1;
    ++n_diverged_;
  }
}

void Ensemble::step() {
  const Eigen::Index B = X_.cols();
  const Eigen::Index d = X_.rows();
  const double scale = std::sqrt(2.0 * h_);
  // Chains are advanced in column blocks so the working set stays in cache.
  for (Eigen::Index c0 = 0; c0 < B; c0 += kBlock) {
    const Eigen::Index n = std::min(kBlock, B - c0);
    N_.resize(d, n);
    Z_.resize(d, n);
    // Draw in the same order as run_chain: [lazy coin], ξ, [u].
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto i = static_cast<std::size_t>(c0 + j);
      hold_[i] = diverged_[i];
      last_accepted_[i] = 0;
      if (hold_[i]) continue;
      Stream& rng = rngs_[i];
      if (options_.lazy && rng.uniform() < 0.5) {
        hold_[i] = 1;
        continue;
      }
      rng.fill_normal(N_.col(j));
      if (sampler_ != SamplerId::ULA) u_[i] = rng.uniform();
    }
    auto X = X_.middleCols(c0, n);
    auto fz = fZ_.head(n);
    if (sampler_ == SamplerId::MRW) {
      Z_ = X + scale * N_;
      target_.value_batch(Z_, fz);
    } else {
      GZ_.resize(d, n);
      Z_ = X - h_ * G_.middleCols(c0, n) + scale * N_;
      target_.value_and_gradient_batch(Z_, fz, GZ_);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index c = c0 + j;
      const auto i = static_cast<std::size_t>(c);
      if (hold_[i]) continue;
      const double f_new = fz[j];
      bool take = false;
      switch (sampler_) {
        case SamplerId::ULA:
          if (!(std::isfinite(f_new) && Z_.col(j).allFinite() && GZ_.col(j).allFinite())) {
            mark_diverged(c);
            continue;
          }
          take = true;
          break;
        case SamplerId::MALA: {
          if (f_new == std::numeric_limits<double>::infinity()) continue;
          if (!(std::isfinite(f_new) && Z_.col(j).allFinite() && GZ_.col(j).allFinite())) {
            mark_diverged(c);
            continue;
          }
          const double lr = mala_log_accept_ratio(X_.col(c), f_[c], G_.col(c), Z_.col(j), f_new, GZ_.col(j), h_);
          take = mh_accept(lr, u_[i]);
          break;
        }
        case SamplerId::MRW:
          if (std::isnan(f_new) || !Z_.col(j).allFinite()) {
            mark_diverged(c);
            continue;
          }
          take = mh_accept(f_[c] - f_new, u_[i]);
          break;
      }
      if (take) {
        X_.col(c) = Z_.col(j);
        if (sampler_ != SamplerId::MRW) G_.col(c) = GZ_.col(j);
        f_[c] = f_new;
        last_accepted_[i] = 1;
        ++accept_counts_[i];
      }
    }
  }
  ++iteration_;
}

std::vector<double> Ensemble::project(ConstVectorRef direction) const {
  if (direction.size() != X_.rows()) throw InvalidInput("direction has wrong dimension");
  std::vector<double> out;
  out.reserve(size() - n_diverged_);
  for (Eigen::Index c = 0; c < X_.cols(); ++c) {
    if (!diverged_[static_cast<std::size_t>(c)]) out.push_back(direction.dot(X_.col(c)));
  }
  return out;
}

}  // namespace lcmc
