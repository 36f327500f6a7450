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

#include "lcmc/theory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "lcmc/error.hpp"

namespace lcmc {

std::string to_string(SamplerId id) {
  switch (id) {
    case SamplerId::ULA:
      return "ULA";
    case SamplerId::MALA:
      return "MALA";
    case SamplerId::MRW:
      return "MRW";
  }
  return "?";
}

SamplerId parse_sampler(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (upper == "ULA") return SamplerId::ULA;
  if (upper == "MALA") return SamplerId::MALA;
  if (upper == "MRW" || upper == "RWMH") return SamplerId::MRW;
  throw InvalidInput("unknown sampler '" + name + "' (expected ULA, MALA or MRW)");
}

namespace theory {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(what);
}

void require_dim(int d) { require(d >= 1, "dimension must be at least 1"); }

void require_smooth(double m, double L) {
  require(std::isfinite(L) && L > 0.0, "L must be positive");
  require(std::isfinite(m) && m > 0.0 && m <= L, "m must satisfy 0 < m <= L");
}

// r written in terms of l = log(1/s), so that s = δ/(2κ^{d/2}) never underflows.
double r_log(double l, int d) {
  const double t = l / static_cast<double>(d);
  return 2.0 + 2.0 * std::max(std::pow(t, 0.25), std::sqrt(t));
}

double w_log(double l, double m, double L, int d) {
  const double dd = static_cast<double>(d);
  return std::min(std::sqrt(m) / (r_log(l, d) * L * std::sqrt(dd * L)), 1.0 / (L * dd));
}

// log(1/s) for s = δ/(k·β), with log β given; enforces s < ½.
double log_inv_s(double delta, double k, double log_beta) {
  const double l = std::log(k / delta) + log_beta;
  require(l > std::log(2.0), "delta/(2 beta) must lie in (0, 1/2)");
  return l;
}

void require_bound_params(const TheoryParams& p) {
  require_dim(p.d);
  require_smooth(p.m, p.L);
  require(p.delta > 0.0 && p.delta <= 1.0, "delta must lie in (0, 1]");
  require(p.beta >= 1.0 && std::isfinite(p.beta), "beta must be at least 1");
  require(p.c > 0.0 && p.c_prime > 0.0, "constants c and c' must be positive");
}

}  // namespace

double r(double s, int d) {
  require_dim(d);
  require(s > 0.0 && s <= 0.5, "s must lie in (0, 1/2]");
  return r_log(-std::log(s), d);
}

double w(double s, double m, double L, int d) {
  require_smooth(m, L);
  return std::min(std::sqrt(m) / (r(s, d) * L * std::sqrt(d * L)), 1.0 / (L * d));
}

double alpha_eps(double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  const double l = std::log(16.0 / epsilon);
  return 1.0 + 2.0 * std::sqrt(l) + 2.0 * l;
}

HTildeBranches h_tilde_branches(double s, double epsilon, double m, double L, int d) {
  require_smooth(m, L);
  const double rs = r(s, d);
  const double a = alpha_eps(epsilon);
  const double dd = static_cast<double>(d);
  HTildeBranches b{};
  b.curvature = std::sqrt(epsilon) / (8.0 * std::sqrt(2.0) * rs) * std::sqrt(m) / (L * std::sqrt(dd * L));
  b.dimension = epsilon / (64.0 * a) / (L * dd);
  b.mixed = std::pow(epsilon, 2.0 / 3.0) / (26.0 * std::cbrt(a * rs * rs)) / L *
            std::cbrt(m / (L * dd * dd));
  return b;
}

double h_tilde(double s, double epsilon, double m, double L, int d) {
  const auto b = h_tilde_branches(s, epsilon, m, L, d);
  return std::min({b.curvature, b.dimension, b.mixed});
}

double w_lc(double s, double L, int d, double nu) {
  require(std::isfinite(L) && L > 0.0, "L must be positive");
  require(nu > 0.0 && std::isfinite(nu), "nu must be positive");
  const double dd = static_cast<double>(d);
  return std::min(std::sqrt(s) / (r(s, d) * std::sqrt(nu * L)), 1.0) / (L * dd);
}

BoundReport mala_mixing_bound(const TheoryParams& p) {
  require_bound_params(p);
  const double l = log_inv_s(p.delta, 2.0, std::log(p.beta));
  const double d = p.d;
  const double k = p.kappa();
  BoundReport rep;
  rep.formula_id = "mala_warm";
  rep.step_size = p.c * w_log(l, p.m, p.L, p.d);
  rep.mixing_steps = p.c_prime * l * std::max(d * k, std::sqrt(d) * std::pow(k, 1.5) * r_log(l, p.d));
  rep.inputs = p;
  return rep;
}

BoundReport mrw_mixing_bound(const TheoryParams& p) {
  require_bound_params(p);
  const double l = log_inv_s(p.delta, 2.0, std::log(p.beta));
  const double d = p.d;
  const double k = p.kappa();
  const double rr = r_log(l, p.d);
  BoundReport rep;
  rep.formula_id = "mrw_warm";
  rep.step_size = p.c * p.m / (d * p.L * p.L * rr);
  rep.mixing_steps = p.c_prime * d * k * k * rr * l;
  rep.inputs = p;
  return rep;
}

double warmness_at_mode(double kappa, int d) {
  require_dim(d);
  require(kappa >= 1.0, "kappa must be at least 1");
  return std::pow(kappa, 0.5 * d);
}

double warmness_inexact(double kappa, int d, double L, double L_tilde, double eps_mode) {
  require_dim(d);
  require(kappa >= 1.0, "kappa must be at least 1");
  require(L > 0.0 && L_tilde >= L, "L_tilde must be at least L");
  require(eps_mode >= 0.0, "eps_mode must be non-negative");
  return std::exp(0.5 * d * std::log(2.0 * kappa * L_tilde / L) + L_tilde * eps_mode * eps_mode);
}

std::pair<BoundReport, BoundReport> feasible_start_bounds(const TheoryParams& p) {
  TheoryParams q = p;
  require_bound_params(q);
  const double d = p.d;
  const double k = p.kappa();
  require(k >= 1.0, "kappa must be at least 1");
  const double log_beta = 0.5 * d * std::log(k);
  q.beta = std::exp(std::min(log_beta, 700.0));
  const double l = log_inv_s(p.delta, 2.0, log_beta);
  // log(κ / δ^{1/d})
  const double lk = std::log(k) - std::log(p.delta) / d;

  BoundReport mala;
  mala.formula_id = "mala_feasible_start";
  mala.step_size = p.c * w_log(l, p.m, p.L, p.d);
  mala.mixing_steps = p.c_prime * d * d * k * lk * std::max(1.0, std::sqrt(k / d * lk));
  mala.inputs = q;

  BoundReport mrw;
  mrw.formula_id = "mrw_feasible_start";
  mrw.step_size = p.c * p.m / (d * p.L * p.L * r_log(l, p.d));
  mrw.mixing_steps = p.c_prime * d * d * k * k * std::pow(lk, 1.5);
  mrw.inputs = q;
  return {mala, mrw};
}

BoundReport inexact_start_bound(const TheoryParams& p, double L_tilde, double eps_mode) {
  require_bound_params(p);
  require(L_tilde >= p.L, "L_tilde must be at least L");
  require(eps_mode >= 0.0, "eps_mode must be non-negative");
  const double d = p.d;
  const double k = p.kappa();
  const double log_beta = 0.5 * d * std::log(2.0 * k * L_tilde / p.L) + L_tilde * eps_mode * eps_mode;
  const double l = log_inv_s(p.delta, 2.0, log_beta);
  // log((2κL̃/L) / δ^{1/d})
  const double lk = std::log(2.0 * k * L_tilde / p.L) - std::log(p.delta) / d;
  const double pen = std::sqrt(L_tilde) * eps_mode / std::sqrt(d);

  BoundReport rep;
  rep.formula_id = "mala_inexact_start";
  rep.step_size = p.c * w_log(l, p.m, p.L, p.d);
  rep.mixing_steps = p.c_prime * d * d * k * (lk + L_tilde * eps_mode * eps_mode / d) *
                     std::max(1.0, std::sqrt(k / d) * (std::sqrt(lk) + pen));
  rep.inputs = p;
  rep.inputs.beta = std::exp(std::min(log_beta, 700.0));
  return rep;
}

WeaklyPlan weakly_logconcave_plan(const TheoryParams& p) {
  require_dim(p.d);
  require(std::isfinite(p.L) && p.L > 0.0, "L must be positive");
  require(p.nu > 0.0 && std::isfinite(p.nu), "nu must be positive");
  require(p.delta > 0.0 && p.delta < 1.0, "delta must lie in (0, 1)");
  require(p.beta >= 1.0 && std::isfinite(p.beta), "beta must be at least 1");
  const double d = p.d;
  const double ratio = p.L * p.nu / p.delta;

  WeaklyPlan plan;
  plan.lambda = 2.0 * p.delta / (d * p.nu);
  plan.kappa_tilde_simplified = ratio * d;
  plan.kappa_tilde = 1.0 + plan.kappa_tilde_simplified;

  const double l4 = std::log(4.0 * p.beta / p.delta);
  plan.report.formula_id = "mala_weakly_logconcave";
  plan.report.step_size = p.c * w_lc(p.delta / (2.0 * p.beta), p.L, p.d, p.nu);
  plan.report.mixing_steps =
      p.c_prime * l4 * std::max(d * d * ratio, d * d * std::pow(ratio, 1.5) * r_log(l4, p.d));
  plan.report.inputs = p;
  plan.report.inputs.m = 0.0;
  return plan;
}

double practical_step_size(SamplerId sampler, int d, double kappa, double L, double delta) {
  require_dim(d);
  require(kappa > 0.0 && std::isfinite(kappa), "kappa must be positive and finite");
  require(L > 0.0 && std::isfinite(L), "L must be positive");
  const double dd = static_cast<double>(d);
  switch (sampler) {
    case SamplerId::ULA:
      require(delta > 0.0, "delta must be positive");
      return delta * delta / (dd * kappa * L);
    case SamplerId::MALA:
      return std::min(1.0 / std::sqrt(dd * kappa), 1.0 / dd) / L;
    case SamplerId::MRW:
      return 1.0 / (dd * kappa * L);
  }
  throw InvalidInput("unknown sampler");
}

ModeResult find_mode(const Target& target, double tol, std::size_t max_iters,
                     const std::optional<Vector>& start) {
  require(tol > 0.0, "tolerance must be positive");
  ModeResult res;
  res.x = start ? *start : Vector::Zero(target.dim());
  require(res.x.size() == target.dim(), "start point has wrong dimension");
  const double step = 1.0 / target.L();
  Vector g(target.dim());
  target.gradient(res.x, g);
  res.gradient_norm = g.norm();
  while (res.gradient_norm > tol) {
    if (!std::isfinite(res.gradient_norm)) {
      throw NonConvergence("gradient descent produced a non-finite gradient", res.x,
                           res.gradient_norm, res.iterations);
    }
    if (res.iterations >= max_iters) {
      throw NonConvergence("gradient descent did not reach the tolerance", res.x,
                           res.gradient_norm, res.iterations);
    }
    res.x -= step * g;
    target.gradient(res.x, g);
    res.gradient_norm = g.norm();
    ++res.iterations;
  }
  return res;
}

double r_ball_radius(double s, double m, int d) {
  require(m > 0.0 && std::isfinite(m), "m must be positive");
  return r(s, d) * std::sqrt(static_cast<double>(d) / m);
}

double step_constant_grid_search() {
  double best = std::numeric_limits<double>::infinity();
  for (double s : {1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.25, 0.45}) {
    for (double kappa : {1.0, 2.0, 4.0, 10.0, 100.0, 1000.0}) {
      for (double L : {0.1, 1.0, 10.0}) {
        for (int d : {1, 2, 4, 8, 16, 64, 256, 1024}) {
          const double m = L / kappa;
          best = std::min(best, h_tilde(s, 0.5, m, L, d) / w(s, m, L, d));
        }
      }
    }
  }
  return best;
}

}  // namespace theory
}  // namespace lcmc
