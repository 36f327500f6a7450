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

#include "lcmc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lcmc/error.hpp"
#include "lcmc/io.hpp"
#include "lcmc/parallel.hpp"
#include "lcmc/random.hpp"
#include "lcmc/samplers.hpp"
#include "lcmc/theory.hpp"

namespace lcmc::verify {
namespace {

std::string describe(std::initializer_list<std::pair<const char*, double>> fields) {
  std::string out;
  for (const auto& [key, value] : fields) {
    if (!out.empty()) out += ';';
    out += key;
    out += '=';
    append_number(out, value);
  }
  return out;
}

const Vector& require_mode(const Target& target) {
  if (!target.mode()) throw InvalidInput("target '" + target.name() + "' has no known mode");
  return *target.mode();
}

// Uniform point in the Euclidean ball B(center, radius).
void uniform_in_ball(Stream& rng, ConstVectorRef center, double radius, VectorRef out) {
  rng.fill_normal(out);
  const double norm = out.norm();
  const double u = rng.uniform();
  const double rho = radius * std::pow(u, 1.0 / static_cast<double>(out.size()));
  out = center + (norm > 0.0 ? rho / norm : 0.0) * out;
}

}  // namespace

double gaussian_tv_exact(ConstVectorRef mu1, ConstVectorRef mu2, double var) {
  if (!(var > 0.0)) throw InvalidInput("variance must be positive");
  if (mu1.size() != mu2.size()) throw InvalidInput("means have different dimensions");
  // 2Φ(t) - 1 = erf(t/√2) with t = ‖Δ‖/(2σ).
  return std::erf((mu1 - mu2).norm() / (2.0 * std::sqrt(2.0 * var)));
}

double gaussian_kl(ConstVectorRef mu1, ConstVectorRef mu2, double var) {
  if (!(var > 0.0)) throw InvalidInput("variance must be positive");
  if (mu1.size() != mu2.size()) throw InvalidInput("means have different dimensions");
  return (mu1 - mu2).squaredNorm() / (2.0 * var);
}

std::vector<PointPair> random_pairs(const Target& target, double h, std::size_t n,
                                    std::uint64_t seed) {
  const Vector center = target.mode() ? *target.mode() : Vector::Zero(target.dim());
  const double spread = target.m() > 0.0 ? 2.0 / std::sqrt(target.m()) : 10.0;
  Stream rng(seed);
  std::vector<PointPair> pairs;
  pairs.reserve(n);
  Vector x(target.dim()), y(target.dim());
  for (std::size_t k = 0; k < n; ++k) {
    rng.fill_normal(x);
    x = center + spread * x;
    rng.fill_normal(y);
    if (k % 2 == 0) {
      y = center + spread * y;
    } else {
      y = x + (std::sqrt(2.0 * h) * rng.uniform()) * y;
    }
    pairs.emplace_back(x, y);
  }
  return pairs;
}

CheckResult check_proposal_tv_bound(const Target& target, double h, std::span<const PointPair> pairs) {
  if (!(h > 0.0) || h > 2.0 / target.L()) throw InvalidInput("step size must lie in (0, 2/L]");
  CheckResult res;
  res.name = "proposal_tv_bound:" + target.name();
  res.n = pairs.size();
  res.bound = 1.0;
  std::size_t violations = 0;
  double worst = 0.0;
  Vector gx(target.dim()), gy(target.dim());
  for (const auto& [x, y] : pairs) {
    target.gradient(x, gx);
    target.gradient(y, gy);
    const double tv = gaussian_tv_exact(x - h * gx, y - h * gy, 2.0 * h);
    const double bound = (x - y).norm() / std::sqrt(2.0 * h);
    if (tv > bound * (1.0 + 1e-12) + 1e-15) ++violations;
    if (bound > 0.0) worst = std::max(worst, tv / bound);
  }
  res.observed = worst;
  res.passed = violations == 0;
  res.detail = describe({{"h", h}, {"violations", static_cast<double>(violations)}});
  return res;
}

CheckResult check_acceptance_floor(const Target& target, double s, double epsilon,
                                   std::size_t n_points, std::size_t n_mc, std::uint64_t seed) {
  if (!(target.m() > 0.0)) throw InvalidInput("acceptance floor check needs m > 0");
  if (n_points == 0 || n_mc < 2) throw InvalidInput("need at least one point and two proposals");
  const Vector& mode = require_mode(target);
  const int d = target.dim();
  const double h = theory::h_tilde(s, epsilon, target.m(), target.L(), d);
  const double radius = theory::r_ball_radius(s, target.m(), d);
  const double floor = 1.0 - epsilon / 8.0;

  CheckResult res;
  res.name = "acceptance_floor:" + target.name() + ":d=" + std::to_string(d);
  res.bound = floor;
  res.n = n_points * n_mc;
  res.seed = seed;
  res.observed = std::numeric_limits<double>::infinity();
  res.passed = true;
  double worst_se = 0.0;
  Vector x(d), gx(d), z(d), gz(d), noise(d);
  for (std::size_t p = 0; p < n_points; ++p) {
    Stream rng(derive_seed(seed, {p}));
    uniform_in_ball(rng, mode, radius, x);
    const double fx = target.value_and_gradient(x, gx);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t k = 0; k < n_mc; ++k) {
      rng.fill_normal(noise);
      z = x - h * gx + std::sqrt(2.0 * h) * noise;
      const double fz = target.value_and_gradient(z, gz);
      const double lr = mala_log_accept_ratio(x, fx, gx, z, fz, gz, h);
      const double a = lr >= 0.0 ? 1.0 : std::exp(lr);
      sum += a;
      sum2 += a * a;
    }
    const double n = static_cast<double>(n_mc);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    const double se = std::sqrt(var / n);
    if (mean < floor - 3.0 * se) res.passed = false;
    if (mean < res.observed) {
      res.observed = mean;
      worst_se = se;
    }
  }
  res.detail = describe({{"s", s}, {"epsilon", epsilon}, {"h", h}, {"radius", radius}, {"se", worst_se}});
  return res;
}

CheckResult check_highprob_region(const Target& target, double s, std::size_t n_mc,
                                  std::uint64_t seed) {
  if (!target.has_exact_sampler()) {
    throw Unsupported("target '" + target.name() + "' has no exact sampler");
  }
  if (n_mc == 0) throw InvalidInput("need at least one sample");
  const Vector& mode = require_mode(target);
  const double radius = theory::r_ball_radius(s, target.m(), target.dim());
  Stream rng(seed);
  Vector x(target.dim());
  std::size_t inside = 0;
  for (std::size_t k = 0; k < n_mc; ++k) {
    target.sample_exact(rng, x);
    if ((x - mode).norm() <= radius) ++inside;
  }
  const double n = static_cast<double>(n_mc);
  CheckResult res;
  res.name = "highprob_region:" + target.name() + ":d=" + std::to_string(target.dim());
  res.observed = static_cast<double>(inside) / n;
  res.bound = 1.0 - s;
  res.passed = res.observed >= 1.0 - s - 3.0 * std::sqrt(s / n);
  res.n = n_mc;
  res.seed = seed;
  res.detail = describe({{"s", s}, {"radius", radius}});
  return res;
}

CheckResult check_fourth_moment(const Target& target, double nu, std::size_t n_mc,
                                std::uint64_t seed) {
  if (!target.has_exact_sampler()) {
    throw Unsupported("target '" + target.name() + "' has no exact sampler");
  }
  if (!(nu >= 0.0)) throw InvalidInput("nu must be non-negative");
  if (n_mc < 2) throw InvalidInput("need at least two samples");
  const Vector& mode = require_mode(target);
  Stream rng(seed);
  Vector x(target.dim());
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < n_mc; ++k) {
    target.sample_exact(rng, x);
    const double r2 = (x - mode).squaredNorm();
    const double m4 = r2 * r2;
    sum += m4;
    sum2 += m4 * m4;
  }
  const double n = static_cast<double>(n_mc);
  const double mean = sum / n;
  const double se = std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) / n);
  const double d = target.dim();
  CheckResult res;
  res.name = "fourth_moment:" + target.name() + ":d=" + std::to_string(target.dim());
  res.observed = mean;
  res.bound = d * d * nu * nu;
  res.passed = mean <= res.bound + 3.0 * se;
  res.n = n_mc;
  res.seed = seed;
  res.detail = describe({{"nu", nu}, {"se", se}});
  return res;
}

std::pair<Vector, Vector> simpson_grid(double lo, double hi, int intervals) {
  if (!(hi > lo)) throw InvalidInput("grid needs lo < hi");
  if (intervals < 2 || intervals % 2 != 0) throw InvalidInput("Simpson needs an even interval count");
  const double dx = (hi - lo) / intervals;
  Vector nodes(intervals + 1), weights(intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    nodes[i] = lo + dx * i;
    weights[i] = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  }
  weights *= dx / 3.0;
  return {nodes, weights};
}

DiscreteKernel discretize_kernel(const Vector& nodes, const Vector& weights, const Vector& f,
                                 const std::function<double(int, int)>& log_proposal,
                                 bool metropolize) {
  const auto n = static_cast<int>(nodes.size());
  if (n < 2 || weights.size() != n || f.size() != n) throw InvalidInput("grid arrays must match");
  DiscreteKernel k;
  k.nodes = nodes;
  k.weights = weights;
  const double fmin = f.minCoeff();
  k.mu = ((fmin - f.array()).exp() * weights.array()).matrix();
  k.mu /= k.mu.sum();
  k.Q.setZero(n, n);
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double lp = log_proposal(i, j);
      double log_q = lp;
      if (metropolize) {
        // log[π(x_j)p(x_j,x_i)] - log[π(x_i)p(x_i,x_j)]
        const double lr = (f[i] - f[j]) + log_proposal(j, i) - lp;
        log_q += std::min(0.0, lr);
      }
      const double q = std::exp(log_q) * weights[j];
      k.Q(i, j) = q;
      off += q;
    }
    k.Q(i, i) = 1.0 - off;
  }
  return k;
}

std::pair<double, double> kernel_grid_range(const Target& target, double max_tail) {
  if (target.dim() != 1) throw InvalidInput("kernel checks need a 1-D target");
  const double center = target.mode() ? (*target.mode())[0] : 0.0;
  const double scale = target.m() > 0.0 ? 1.0 / std::sqrt(target.m()) : 1.0;
  Vector p(1), g(1);
  p[0] = center;
  const double f0 = target.value(p);
  for (double w = 2.0 * scale; w < 1e4 * scale; w += 0.5 * scale) {
    double tail = 0.0;
    for (double b : {center - w, center + w}) {
      p[0] = b;
      const double fb = target.value_and_gradient(p, g) - f0;
      const double slope = std::abs(g[0]);
      tail += slope > 0.0 ? std::exp(-fb) / slope : std::numeric_limits<double>::infinity();
    }
    // ∫e^{-(f - f0)} ≥ √(2π/L) for an L-smooth f, a lower bound on the normalizer.
    if (tail / std::sqrt(2.0 * std::numbers::pi / target.L()) < max_tail) return {center - w, center + w};
  }
  throw InvalidInput("could not find a grid covering the target");
}

KernelReport kernel_residuals_1d(const Target& target, SamplerId sampler, double h, double lo,
                                 double hi, int intervals, bool lazy) {
  if (target.dim() != 1) throw InvalidInput("kernel checks need a 1-D target");
  if (!(h > 0.0)) throw InvalidInput("step size must be positive");
  const auto [nodes, weights] = simpson_grid(lo, hi, intervals);
  const int n = static_cast<int>(nodes.size());
  Vector f(n), g(n);
  Vector p(1), gp(1);
  for (int i = 0; i < n; ++i) {
    p[0] = nodes[i];
    f[i] = target.value_and_gradient(p, gp);
    g[i] = gp[0];
  }

  // Log-concave tail bound: ∫_b^∞ e^{-f} ≤ e^{-f(b)}/f'(b) for f'(b) > 0.
  const double fmin = f.minCoeff();
  const double z = ((fmin - f.array()).exp() * weights.array()).sum();
  double tail = 0.0;
  tail += g[n - 1] > 0.0 ? std::exp(fmin - f[n - 1]) / g[n - 1] : std::numeric_limits<double>::infinity();
  tail += g[0] < 0.0 ? std::exp(fmin - f[0]) / -g[0] : std::numeric_limits<double>::infinity();
  const double uncovered = tail / z;
  if (!(uncovered <= 1e-6)) {
    throw InvalidInput("kernel grid leaves " + format_number(uncovered) + " of the mass uncovered");
  }

  const double var = 2.0 * h;
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * var);
  std::function<double(int, int)> log_proposal;
  if (sampler == SamplerId::MRW) {
    log_proposal = [&](int i, int j) {
      const double r = nodes[j] - nodes[i];
      return log_norm - r * r / (2.0 * var);
    };
  } else {
    log_proposal = [&](int i, int j) {
      const double r = nodes[j] - (nodes[i] - h * g[i]);
      return log_norm - r * r / (2.0 * var);
    };
  }
  DiscreteKernel k = discretize_kernel(nodes, weights, f, log_proposal, sampler != SamplerId::ULA);
  if (lazy) {
    k.Q *= 0.5;
    k.Q.diagonal().array() += 0.5;
  }

  KernelReport rep;
  rep.nodes = n;
  rep.uncovered_mass = uncovered;
  rep.stationarity_residual = (k.Q.transpose() * k.mu - k.mu).lpNorm<1>();
  const Matrix flow = k.mu.asDiagonal() * k.Q;
  rep.detailed_balance_residual = (flow - flow.transpose()).cwiseAbs().maxCoeff();
  return rep;
}

CheckResult kernel_stationarity_1d(const Target& target, SamplerId sampler, double h, double lo,
                                   double hi, int intervals, double tol, bool lazy) {
  const KernelReport rep = kernel_residuals_1d(target, sampler, h, lo, hi, intervals, lazy);
  CheckResult res;
  res.name = "kernel_stationarity:" + to_string(sampler) + ":" + target.name();
  res.observed = std::max(rep.stationarity_residual, rep.detailed_balance_residual);
  res.bound = tol;
  res.passed = res.observed < tol;
  res.n = static_cast<std::size_t>(rep.nodes);
  res.detail = describe({{"h", h},
                         {"stationarity", rep.stationarity_residual},
                         {"detailed_balance", rep.detailed_balance_residual},
                         {"uncovered", rep.uncovered_mass}});
  return res;
}

Matrix exact_mixture_sampler(const Vector& a, std::uint64_t seed, std::size_t n) {
  return exact_mixture_samples(a, seed, n);
}

std::vector<CheckResult> run_suite(std::uint64_t seed, unsigned threads) {
  using Task = std::function<std::vector<CheckResult>()>;
  std::vector<Task> tasks;

  const Target normal1 = diagonal_gaussian_target(Vector::Ones(1));
  Vector a1(1);
  a1[0] = std::sqrt(0.5);
  const Target mix1 = mixture_target(a1);
  for (const Target* t : {&normal1, &mix1}) {
    tasks.push_back([t] {
      const auto [lo, hi] = kernel_grid_range(*t);
      std::vector<CheckResult> out;
      for (SamplerId s : {SamplerId::MALA, SamplerId::MRW}) {
        out.push_back(kernel_stationarity_1d(*t, s, 0.1, lo, hi));
      }
      const double ula = kernel_residuals_1d(*t, SamplerId::ULA, 0.1, lo, hi).stationarity_residual;
      const double mala = kernel_residuals_1d(*t, SamplerId::MALA, 0.1, lo, hi).stationarity_residual;
      CheckResult cmp;
      cmp.name = "ula_kernel_bias:" + t->name();
      cmp.observed = ula;
      cmp.bound = mala;
      cmp.passed = ula > mala;
      cmp.n = 401;
      cmp.detail = "ULA stationarity residual must exceed MALA's";
      out.push_back(cmp);
      return out;
    });
  }

  Vector a2(2);
  a2 << 0.5, 0.5;
  Matrix dense(2, 2);
  dense << 3.0, 1.0, 1.0, 2.0;
  const std::vector<Target> tv_targets{
      diagonal_gaussian_target((Vector(2) << 4.0, 1.0).finished()), gaussian_target(dense),
      mixture_target(a2),
      logistic_posterior(LogisticData::synthetic(50, 2, 1.0, Vector::Ones(2), 1.0, derive_seed(seed, {7})))};
  for (std::size_t i = 0; i < tv_targets.size(); ++i) {
    tasks.push_back([&tv_targets, i, seed] {
      const Target& t = tv_targets[i];
      const double h = 1.0 / (t.L() * t.dim());
      const auto pairs = random_pairs(t, h, 10000, derive_seed(seed, {1, i}));
      auto res = check_proposal_tv_bound(t, h, pairs);
      res.seed = derive_seed(seed, {1, i});
      return std::vector<CheckResult>{res};
    });
  }

  for (int d : {2, 8}) {
    for (double s : {0.25, 0.5}) {
      for (double eps : {0.25, 0.5}) {
        tasks.push_back([d, s, eps, seed] {
          Vector var = Vector::LinSpaced(d, 4.0, 1.0);
          const Target t = diagonal_gaussian_target(var);
          const std::uint64_t sd = derive_seed(seed, {2, static_cast<std::uint64_t>(d),
                                                      static_cast<std::uint64_t>(s * 100),
                                                      static_cast<std::uint64_t>(eps * 100)});
          return std::vector<CheckResult>{check_acceptance_floor(t, s, eps, 50, 10000, sd)};
        });
      }
    }
  }

  const std::vector<Target> exact_targets{
      diagonal_gaussian_target(Vector::Ones(4)),
      diagonal_gaussian_target((Vector(2) << 4.0, 1.0).finished()), mixture_target(a2)};
  for (std::size_t i = 0; i < exact_targets.size(); ++i) {
    for (double s : {0.01, 0.1, 0.4}) {
      tasks.push_back([&exact_targets, i, s, seed] {
        const std::uint64_t sd = derive_seed(seed, {3, i, static_cast<std::uint64_t>(s * 100)});
        return std::vector<CheckResult>{check_highprob_region(exact_targets[i], s, 100000, sd)};
      });
    }
  }
  tasks.push_back([seed] {
    const Target t = diagonal_gaussian_target(Vector::Ones(4));
    return std::vector<CheckResult>{check_fourth_moment(t, 1.5, 100000, derive_seed(seed, {4}))};
  });

  std::vector<std::vector<CheckResult>> slots(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) { slots[i] = tasks[i](); });
  std::vector<CheckResult> out;
  for (auto& slot : slots) {
    for (auto& r : slot) out.push_back(std::move(r));
  }
  return out;
}

std::string results_csv(const std::vector<CheckResult>& results) {
  CsvWriter csv({"name", "observed", "bound", "passed", "n", "seed", "detail"});
  for (const auto& r : results) {
    csv.cell(r.name).cell(r.observed).cell(r.bound).cell(r.passed ? std::string_view("true") : "false");
    csv.cell(static_cast<long long>(r.n)).cell(std::to_string(r.seed)).cell(r.detail);
    csv.end_row();
  }
  return csv.str();
}

}  // namespace lcmc::verify
