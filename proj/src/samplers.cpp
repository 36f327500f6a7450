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

#include "lcmc/samplers.hpp"

#include <cmath>
#include <limits>

#include "lcmc/error.hpp"
#include "lcmc/io.hpp"

namespace lcmc {
namespace {

void require_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("step size must be positive and finite");
}

void require_noise(const ChainState& state, ConstVectorRef noise) {
  if (noise.size() != state.x.size()) throw InvalidInput("noise has wrong dimension");
}

[[noreturn]] void diverge(const char* what, ConstVectorRef x, std::size_t step) {
  throw ChainDivergence(what, Vector(x), step);
}

}  // namespace

ChainState ChainState::at(const Target& target, ConstVectorRef x, bool with_gradient) {
  if (x.size() != target.dim()) throw InvalidInput("initial point has wrong dimension");
  ChainState s;
  s.x = x;
  if (with_gradient) {
    s.grad_x.resize(target.dim());
    s.f_x = target.value_and_gradient(x, s.grad_x);
    if (!s.grad_x.allFinite()) diverge("non-finite gradient at the initial point", x, 0);
  } else {
    s.f_x = target.value(x);
  }
  if (!std::isfinite(s.f_x)) diverge("non-finite f at the initial point", x, 0);
  return s;
}

StepResult ula_step(ChainState& state, const Target& target, double h, ConstVectorRef noise) {
  require_step(h);
  require_noise(state, noise);
  if (!state.has_gradient()) throw InvalidInput("ULA needs a state with a cached gradient");
  Vector next = state.x - h * state.grad_x + std::sqrt(2.0 * h) * noise;
  const std::size_t k = state.step_index + 1;
  if (!next.allFinite()) diverge("ULA iterate is not finite", next, k);
  const double f = target.value_and_gradient(next, state.grad_x);
  if (!std::isfinite(f) || !state.grad_x.allFinite()) diverge("ULA reached a non-finite f or gradient", next, k);
  state.x = std::move(next);
  state.f_x = f;
  state.step_index = k;
  return {};
}

Vector mala_propose(const ChainState& state, double h, ConstVectorRef noise) {
  require_step(h);
  require_noise(state, noise);
  if (!state.has_gradient()) throw InvalidInput("MALA needs a state with a cached gradient");
  return state.x - h * state.grad_x + std::sqrt(2.0 * h) * noise;
}

double mala_log_accept_ratio(ConstVectorRef x, double f_x, ConstVectorRef grad_x,
                             ConstVectorRef z, double f_z, ConstVectorRef grad_z, double h) {
  const double forward = (z - x + h * grad_x).squaredNorm();
  const double backward = (x - z + h * grad_z).squaredNorm();
  return (f_x - f_z) + (forward - backward) / (4.0 * h);
}

double mala_log_accept_ratio(ConstVectorRef x, ConstVectorRef z, const Target& target, double h) {
  require_step(h);
  if (x.size() != target.dim() || z.size() != target.dim()) {
    throw InvalidInput("points have wrong dimension");
  }
  if (!x.allFinite()) diverge("non-finite current point", x, 0);
  if (!z.allFinite()) diverge("non-finite proposal", z, 0);
  Vector gx(target.dim());
  Vector gz(target.dim());
  const double fx = target.value_and_gradient(x, gx);
  const double fz = target.value_and_gradient(z, gz);
  if (!std::isfinite(fx) || !gx.allFinite()) diverge("non-finite f or gradient", x, 0);
  if (!std::isfinite(fz) || !gz.allFinite()) diverge("non-finite f or gradient", z, 0);
  return mala_log_accept_ratio(x, fx, gx, z, fz, gz, h);
}

bool mh_accept(double log_ratio, double u) {
  if (std::isnan(log_ratio)) return false;
  if (log_ratio >= 0.0) return true;
  if (log_ratio == -std::numeric_limits<double>::infinity()) return false;
  return std::log(u) <= log_ratio;
}

StepResult mala_step(ChainState& state, const Target& target, double h, ConstVectorRef noise,
                     double u) {
  Vector z = mala_propose(state, h, noise);
  const std::size_t k = state.step_index + 1;
  state.step_index = k;
  if (!z.allFinite()) diverge("MALA proposal is not finite", z, k);
  Vector gz(target.dim());
  const double fz = target.value_and_gradient(z, gz);
  StepResult res;
  if (fz == std::numeric_limits<double>::infinity()) {
    res.accepted = false;
    res.log_ratio = -std::numeric_limits<double>::infinity();
    return res;
  }
  if (std::isnan(fz) || !gz.allFinite()) diverge("MALA proposal has non-finite f or gradient", z, k);
  res.log_ratio = mala_log_accept_ratio(state.x, state.f_x, state.grad_x, z, fz, gz, h);
  res.accepted = mh_accept(res.log_ratio, u);
  if (res.accepted) {
    state.x = std::move(z);
    state.f_x = fz;
    state.grad_x = std::move(gz);
  }
  return res;
}

StepResult mrw_step(ChainState& state, const Target& target, double h, ConstVectorRef noise,
                    double u) {
  require_step(h);
  require_noise(state, noise);
  Vector z = state.x + std::sqrt(2.0 * h) * noise;
  const std::size_t k = state.step_index + 1;
  state.step_index = k;
  if (!z.allFinite()) diverge("MRW proposal is not finite", z, k);
  const double fz = target.value(z);
  if (std::isnan(fz)) diverge("MRW proposal has a NaN f", z, k);
  StepResult res;
  res.log_ratio = state.f_x - fz;
  res.accepted = mh_accept(res.log_ratio, u);
  if (res.accepted) {
    state.x = std::move(z);
    state.f_x = fz;
    if (state.has_gradient()) target.gradient(state.x, state.grad_x);
  }
  return res;
}

StepResult step(SamplerId id, ChainState& state, const Target& target, double h,
                ConstVectorRef noise, double u) {
  switch (id) {
    case SamplerId::ULA:
      return ula_step(state, target, h, noise);
    case SamplerId::MALA:
      return mala_step(state, target, h, noise, u);
    case SamplerId::MRW:
      return mrw_step(state, target, h, noise, u);
  }
  throw InvalidInput("unknown sampler");
}

InitialDistribution InitialDistribution::point_mass(Vector x) {
  InitialDistribution init;
  init.kind = Kind::PointMass;
  init.mean = std::move(x);
  return init;
}

InitialDistribution InitialDistribution::gaussian_at_mode(double cov_scale) {
  if (!(cov_scale > 0.0)) throw InvalidInput("cov_scale must be positive");
  InitialDistribution init;
  init.kind = Kind::GaussianAtMode;
  init.cov_scale = cov_scale;
  return init;
}

InitialDistribution InitialDistribution::gaussian_inexact(Vector x_tilde, double L_tilde,
                                                          double cov_scale) {
  if (!(cov_scale > 0.0)) throw InvalidInput("cov_scale must be positive");
  if (!(L_tilde > 0.0)) throw InvalidInput("L_tilde must be positive");
  InitialDistribution init;
  init.kind = Kind::GaussianInexact;
  init.mean = std::move(x_tilde);
  init.L_tilde = L_tilde;
  init.cov_scale = cov_scale;
  return init;
}

InitialDistribution InitialDistribution::from_sampler(std::function<void(Stream&, VectorRef)> draw) {
  if (!draw) throw InvalidInput("custom initial distribution needs a sampler");
  InitialDistribution init;
  init.kind = Kind::Custom;
  init.custom = std::move(draw);
  return init;
}

void sample_initial(const InitialDistribution& init, const Target& target, Stream& rng,
                    VectorRef out) {
  const int d = target.dim();
  if (out.size() != d) throw InvalidInput("output has wrong dimension");
  switch (init.kind) {
    case InitialDistribution::Kind::PointMass:
      if (init.mean.size() != d) throw InvalidInput("point mass has wrong dimension");
      out = init.mean;
      return;
    case InitialDistribution::Kind::GaussianAtMode: {
      if (!target.mode()) throw InvalidInput("target '" + target.name() + "' has no known mode");
      if (!(init.cov_scale > 0.0)) throw InvalidInput("cov_scale must be positive");
      rng.fill_normal(out);
      out = *target.mode() + std::sqrt(init.cov_scale / target.L()) * out;
      return;
    }
    case InitialDistribution::Kind::GaussianInexact: {
      if (init.mean.size() != d) throw InvalidInput("approximate mode has wrong dimension");
      if (!(init.L_tilde > 0.0) || !(init.cov_scale > 0.0)) {
        throw InvalidInput("inexact start needs positive L_tilde and cov_scale");
      }
      rng.fill_normal(out);
      out = init.mean + std::sqrt(init.cov_scale / (2.0 * init.L_tilde)) * out;
      return;
    }
    case InitialDistribution::Kind::Custom:
      if (!init.custom) throw InvalidInput("custom initial distribution needs a sampler");
      init.custom(rng, out);
      return;
  }
}

Vector sample_initial(const InitialDistribution& init, const Target& target, std::uint64_t seed) {
  Stream rng(seed);
  Vector out(target.dim());
  sample_initial(init, target, rng, out);
  return out;
}

std::string Trajectory::to_csv() const {
  std::vector<std::string> header{"step"};
  for (int i = 1; i <= dim(); ++i) header.push_back("x_" + std::to_string(i));
  header.emplace_back("accepted");
  CsvWriter csv(header);
  for (Eigen::Index k = 0; k < states.cols(); ++k) {
    csv.cell(static_cast<long long>(k));
    for (Eigen::Index i = 0; i < states.rows(); ++i) csv.cell(states(i, k));
    if (k == 0) {
      csv.cell(std::string_view{});
    } else {
      csv.cell(static_cast<long long>(accepted[static_cast<std::size_t>(k - 1)]));
    }
    csv.end_row();
  }
  return csv.str();
}

void Trajectory::write_csv(const std::filesystem::path& path) const { write_text_file(path, to_csv()); }

Trajectory run_chain(SamplerId sampler, const Target& target, const InitialDistribution& init,
                     double h, std::size_t steps, std::uint64_t seed, const ChainOptions& options) {
  require_step(h);
  const int d = target.dim();
  Trajectory traj;
  traj.sampler = sampler;
  traj.h = h;
  traj.seed = seed;
  traj.states.resize(d, static_cast<Eigen::Index>(steps) + 1);
  traj.accepted.reserve(steps);
  if (options.record_proposals) traj.proposals.resize(d, static_cast<Eigen::Index>(steps));

  Stream rng(seed);
  Vector x0(d);
  sample_initial(init, target, rng, x0);
  ChainState state = ChainState::at(target, x0, sampler != SamplerId::MRW);
  traj.states.col(0) = state.x;

  const double scale = std::sqrt(2.0 * h);
  Vector noise(d);
  for (std::size_t k = 0; k < steps; ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    if (options.lazy && rng.uniform() < 0.5) {
      ++state.step_index;
      traj.accepted.push_back(0);
      if (options.record_proposals) traj.proposals.col(col) = state.x;
      traj.states.col(col + 1) = state.x;
      continue;
    }
    rng.fill_normal(noise);
    const double u = sampler == SamplerId::ULA ? 0.0 : rng.uniform();
    if (options.record_proposals) {
      if (sampler == SamplerId::MRW) {
        traj.proposals.col(col) = state.x + scale * noise;
      } else {
        traj.proposals.col(col) = state.x - h * state.grad_x + scale * noise;
      }
    }
    const StepResult res = step(sampler, state, target, h, noise, u);
    traj.accepted.push_back(res.accepted ? 1 : 0);
    traj.states.col(col + 1) = state.x;
  }
  return traj;
}

}  // namespace lcmc
