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
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lcmc/random.hpp"
#include "lcmc/sampler_id.hpp"
#include "lcmc/targets.hpp"

namespace lcmc {

/// Current point plus cached f(x) and, for gradient-based chains, ∇f(x).
struct ChainState {
  Vector x;
  double f_x = 0.0;
  Vector grad_x;  // empty for MRW
  std::size_t step_index = 0;

  /// Evaluates the caches at `x`. Throws ChainDivergence if they are not finite.
  static ChainState at(const Target& target, ConstVectorRef x, bool with_gradient = true);

  bool has_gradient() const { return grad_x.size() > 0; }
};

struct StepResult {
  bool accepted = true;
  double log_ratio = 0.0;  // 0 for ULA
};

/// x ← x - h∇f(x) + √(2h)ξ. Never rejects.
StepResult ula_step(ChainState& state, const Target& target, double h, ConstVectorRef noise);

/// z = x - h∇f(x) + √(2h)ξ.
Vector mala_propose(const ChainState& state, double h, ConstVectorRef noise);

/// log[π(z)p(z,x)] - log[π(x)p(x,z)] for the Langevin proposal p.
double mala_log_accept_ratio(ConstVectorRef x, ConstVectorRef z, const Target& target, double h);

/// Same ratio from cached values; no target evaluations.
double mala_log_accept_ratio(ConstVectorRef x, double f_x, ConstVectorRef grad_x,
                             ConstVectorRef z, double f_z, ConstVectorRef grad_z, double h);

/// true iff log(u) ≤ min(0, log_ratio).
bool mh_accept(double log_ratio, double u);

/// Langevin proposal followed by a Metropolis-Hastings correction.
StepResult mala_step(ChainState& state, const Target& target, double h, ConstVectorRef noise,
                     double u);

/// Random-walk proposal z = x + √(2h)ξ with acceptance min{1, π(z)/π(x)}.
StepResult mrw_step(ChainState& state, const Target& target, double h, ConstVectorRef noise,
                    double u);

/// Dispatches on `id`; `u` is ignored by ULA.
StepResult step(SamplerId id, ChainState& state, const Target& target, double h,
                ConstVectorRef noise, double u);

struct InitialDistribution {
  enum class Kind { PointMass, GaussianAtMode, GaussianInexact, Custom };

  Kind kind = Kind::GaussianAtMode;
  Vector mean;             // point mass location or approximate mode x̃
  double cov_scale = 1.0;  // multiplies the isotropic variance 1/L (or 1/(2L̃))
  double L_tilde = 0.0;    // smoothness upper bound for GaussianInexact
  std::function<void(Stream&, VectorRef)> custom;

  static InitialDistribution point_mass(Vector x);
  /// N(x⋆, cov_scale/L · I).
  static InitialDistribution gaussian_at_mode(double cov_scale = 1.0);
  /// N(x̃, cov_scale/(2L̃) · I).
  static InitialDistribution gaussian_inexact(Vector x_tilde, double L_tilde, double cov_scale = 1.0);
  static InitialDistribution from_sampler(std::function<void(Stream&, VectorRef)> draw);
};

void sample_initial(const InitialDistribution& init, const Target& target, Stream& rng, VectorRef out);
Vector sample_initial(const InitialDistribution& init, const Target& target, std::uint64_t seed);

struct ChainOptions {
  /// Hold in place with probability ½ before every step.
  bool lazy = false;
  bool record_proposals = false;
};

struct Trajectory {
  SamplerId sampler = SamplerId::MALA;
  double h = 0.0;
  std::uint64_t seed = 0;
  Matrix states;                      // d x (steps + 1)
  std::vector<std::uint8_t> accepted;  // one flag per step
  Matrix proposals;                   // d x steps when recorded, otherwise empty

  std::size_t steps() const { return accepted.size(); }
  int dim() const { return static_cast<int>(states.rows()); }

  /// Columns step, x_1..x_d, accepted (empty for the initial state).
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
};

/// Draws x₀ from `init` and takes `steps` steps. The first draws of the
/// stream go to x₀; each step then uses [lazy coin], ξ, [u]. Throws
/// ChainDivergence with the step index if f or ∇f stop being finite.
Trajectory run_chain(SamplerId sampler, const Target& target, const InitialDistribution& init,
                     double h, std::size_t steps, std::uint64_t seed,
                     const ChainOptions& options = {});

}  // namespace lcmc
