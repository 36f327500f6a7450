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

#include "lcmc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include "lcmc/config.hpp"
#include "lcmc/ensemble.hpp"
#include "lcmc/error.hpp"
#include "lcmc/io.hpp"
#include "lcmc/parallel.hpp"
#include "lcmc/samplers.hpp"
#include "lcmc/targets.hpp"
#include "lcmc/theory.hpp"

namespace lcmc {

namespace diag = diagnostics;

std::string to_string(StepRule rule) {
  switch (rule) {
    case StepRule::Practical:
      return "practical";
    case StepRule::Bound:
      return "bound";
    case StepRule::Explicit:
      return "explicit";
  }
  return "?";
}

std::string to_string(KmixMode mode) { return mode == KmixMode::Pooled ? "pooled" : "per_run"; }

namespace {

StepRule parse_step_rule(const config::Entry& e) {
  if (e.value == "practical") return StepRule::Practical;
  if (e.value == "bound") return StepRule::Bound;
  if (e.value == "explicit") return StepRule::Explicit;
  throw ParseError("key 'step_rule': expected practical, bound or explicit", e.line, e.key);
}

KmixMode parse_kmix_mode(const config::Entry& e) {
  if (e.value == "pooled") return KmixMode::Pooled;
  if (e.value == "per_run") return KmixMode::PerRun;
  throw ParseError("key 'kmix_mode': expected pooled or per_run", e.line, e.key);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      append_number(out, values[i]);
    } else if constexpr (std::is_same_v<T, SamplerId>) {
      out += to_string(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::string number(double v) { return format_number(v); }

bool should_record(std::size_t k, int every) {
  return k <= 100 || k % static_cast<std::size_t>(std::max(1, every)) == 0;
}

void log_line(const RunOptions& options, const std::string& msg) {
  if (options.verbose) std::cerr << msg << std::endl;
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"gaussian_dim", "gaussian_err", "weakly_dim", "weakly_err",
                                            "mixture_tv",   "logistic",     "stepsize_accept"};
  return ids;
}

ExperimentSpec preset(const std::string& id) {
  ExperimentSpec s;
  s.experiment_id = id;
  if (id == "gaussian_dim") {
    s.dims = {2, 4, 8, 16, 32, 64};
    s.delta = 0.2;
    s.runs = 10;
    s.chains = 500;
    s.steps = 20000;
  } else if (id == "gaussian_err") {
    s.dims = {2};
    s.deltas = {0.02, 0.03, 0.05, 0.08, 0.12};
    s.ula_step_delta_factor = 10.0;
    s.runs = 10;
    s.chains = 30000;
    s.steps = 20000;
  } else if (id == "weakly_dim") {
    s.dims = {3, 4, 6, 8, 12};
    s.delta = 0.2;
    s.runs = 10;
    s.chains = 3000;
    s.steps = 100000;
  } else if (id == "weakly_err") {
    s.dims = {3};
    s.deltas = {0.1, 0.14, 0.2, 0.28, 0.4};
    s.runs = 10;
    s.chains = 3000;
    s.steps = 100000;
  } else if (id == "mixture_tv") {
    s.dims = {2};
    s.delta = 0.2;
    s.runs = 1;
    s.chains = 250000;
    s.steps = 1000;
    s.record_every = 5;
  } else if (id == "logistic") {
    s.dims = {2};
    s.delta = 1.0;
    s.runs = 1;
    s.chains = 1000;
    s.steps = 3000;
    s.record_every = 10;
  } else if (id == "stepsize_accept") {
    s.samplers = {SamplerId::MALA, SamplerId::MRW};
    s.step_rule = StepRule::Explicit;
    s.dims = {2, 4, 8, 16, 32, 64, 128};
    s.runs = 50;
    s.chains = 1;
    s.burn_in = 500;
    s.window = 100;
  } else {
    throw InvalidInput("unknown experiment id '" + id + "'");
  }
  return s;
}

ExperimentSpec parse_spec(const std::string& text) {
  const auto entries = config::parse(text);
  std::string id = "gaussian_dim";
  for (const auto& e : entries) {
    if (e.key == "experiment_id") {
      id = e.value;
      if (std::find(experiment_ids().begin(), experiment_ids().end(), id) == experiment_ids().end()) {
        throw ParseError("unknown experiment_id '" + id + "'", e.line, e.key);
      }
    }
  }
  ExperimentSpec s = preset(id);
  using Setter = std::function<void(const config::Entry&)>;
  const std::map<std::string, Setter> setters{
      {"experiment_id", [](const config::Entry&) {}},
      {"samplers",
       [&](const config::Entry& e) {
         s.samplers.clear();
         for (const auto& name : config::to_list(e)) {
           try {
             s.samplers.push_back(parse_sampler(name));
           } catch (const InvalidInput& err) {
             throw ParseError(err.what(), e.line, e.key);
           }
         }
       }},
      {"step_rule", [&](const config::Entry& e) { s.step_rule = parse_step_rule(e); }},
      {"step_sizes", [&](const config::Entry& e) { s.step_sizes = config::to_double_list(e); }},
      {"dims", [&](const config::Entry& e) { s.dims = config::to_int_list(e); }},
      {"deltas", [&](const config::Entry& e) { s.deltas = config::to_double_list(e); }},
      {"delta", [&](const config::Entry& e) { s.delta = config::to_double(e); }},
      {"ula_step_delta_factor", [&](const config::Entry& e) { s.ula_step_delta_factor = config::to_double(e); }},
      {"kappa", [&](const config::Entry& e) { s.kappa = config::to_double(e); }},
      {"L", [&](const config::Entry& e) { s.L = config::to_double(e); }},
      {"weak_var", [&](const config::Entry& e) { s.weak_var = config::to_double(e); }},
      {"interior_var", [&](const config::Entry& e) { s.interior_var = config::to_double(e); }},
      {"runs", [&](const config::Entry& e) { s.runs = static_cast<int>(config::to_int(e)); }},
      {"chains", [&](const config::Entry& e) { s.chains = static_cast<int>(config::to_int(e)); }},
      {"steps", [&](const config::Entry& e) { s.steps = static_cast<int>(config::to_int(e)); }},
      {"record_every", [&](const config::Entry& e) { s.record_every = static_cast<int>(config::to_int(e)); }},
      {"quantile", [&](const config::Entry& e) { s.quantile = config::to_double(e); }},
      {"kmix_mode", [&](const config::Entry& e) { s.kmix_mode = parse_kmix_mode(e); }},
      {"lazy", [&](const config::Entry& e) { s.lazy = config::to_bool(e); }},
      {"init_cov_scale", [&](const config::Entry& e) { s.init_cov_scale = config::to_double(e); }},
      {"master_seed", [&](const config::Entry& e) { s.master_seed = config::to_uint64(e); }},
      {"mixture_a", [&](const config::Entry& e) { s.mixture_a = config::to_double_list(e); }},
      {"ula_deltas", [&](const config::Entry& e) { s.ula_deltas = config::to_double_list(e); }},
      {"reference_samples", [&](const config::Entry& e) { s.reference_samples = static_cast<int>(config::to_int(e)); }},
      {"reference_draws", [&](const config::Entry& e) { s.reference_draws = static_cast<int>(config::to_int(e)); }},
      {"bins", [&](const config::Entry& e) { s.bins = static_cast<int>(config::to_int(e)); }},
      {"late_window", [&](const config::Entry& e) { s.late_window = static_cast<int>(config::to_int(e)); }},
      {"trace_runs", [&](const config::Entry& e) { s.trace_runs = static_cast<int>(config::to_int(e)); }},
      {"n_obs", [&](const config::Entry& e) { s.n_obs = static_cast<int>(config::to_int(e)); }},
      {"alpha", [&](const config::Entry& e) { s.alpha = config::to_double(e); }},
      {"x_norm", [&](const config::Entry& e) { s.x_norm = config::to_double(e); }},
      {"burn_in", [&](const config::Entry& e) { s.burn_in = static_cast<int>(config::to_int(e)); }},
      {"max_lag", [&](const config::Entry& e) { s.max_lag = static_cast<int>(config::to_int(e)); }},
      {"gammas_mala", [&](const config::Entry& e) { s.gammas_mala = config::to_double_list(e); }},
      {"gammas_mrw", [&](const config::Entry& e) { s.gammas_mrw = config::to_double_list(e); }},
      {"window", [&](const config::Entry& e) { s.window = static_cast<int>(config::to_int(e)); }},
      {"stepsize_target", [&](const config::Entry& e) { s.stepsize_target = e.value; }},
      {"write_svg", [&](const config::Entry& e) { s.write_svg = config::to_bool(e); }},
  };
  for (const auto& e : entries) {
    const auto it = setters.find(e.key);
    if (it == setters.end()) throw ParseError("unknown key '" + e.key + "'", e.line, e.key);
    it->second(e);
  }
  return s;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string format_spec(const ExperimentSpec& s) {
  std::string o;
  auto kv = [&o](const std::string& k, const std::string& v) { o += k + " = " + v + "\n"; };
  kv("experiment_id", s.experiment_id);
  kv("samplers", join(s.samplers));
  kv("step_rule", to_string(s.step_rule));
  kv("step_sizes", join(s.step_sizes));
  kv("dims", join(s.dims));
  kv("deltas", join(s.deltas));
  kv("delta", number(s.delta));
  kv("ula_step_delta_factor", number(s.ula_step_delta_factor));
  kv("kappa", number(s.kappa));
  kv("L", number(s.L));
  kv("weak_var", number(s.weak_var));
  kv("interior_var", number(s.interior_var));
  kv("runs", std::to_string(s.runs));
  kv("chains", std::to_string(s.chains));
  kv("steps", std::to_string(s.steps));
  kv("record_every", std::to_string(s.record_every));
  kv("quantile", number(s.quantile));
  kv("kmix_mode", to_string(s.kmix_mode));
  kv("lazy", s.lazy ? "true" : "false");
  kv("init_cov_scale", number(s.init_cov_scale));
  kv("master_seed", std::to_string(s.master_seed));
  kv("mixture_a", join(s.mixture_a));
  kv("ula_deltas", join(s.ula_deltas));
  kv("reference_samples", std::to_string(s.reference_samples));
  kv("reference_draws", std::to_string(s.reference_draws));
  kv("bins", std::to_string(s.bins));
  kv("late_window", std::to_string(s.late_window));
  kv("trace_runs", std::to_string(s.trace_runs));
  kv("n_obs", std::to_string(s.n_obs));
  kv("alpha", number(s.alpha));
  kv("x_norm", number(s.x_norm));
  kv("burn_in", std::to_string(s.burn_in));
  kv("max_lag", std::to_string(s.max_lag));
  kv("gammas_mala", join(s.gammas_mala));
  kv("gammas_mrw", join(s.gammas_mrw));
  kv("window", std::to_string(s.window));
  kv("stepsize_target", s.stepsize_target);
  kv("write_svg", s.write_svg ? "true" : "false");
  return o;
}

void save_spec(const ExperimentSpec& spec, const std::filesystem::path& path) {
  write_text_file(path, format_spec(spec));
}

void validate(const ExperimentSpec& s) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw InvalidInput("invalid spec: " + what);
  };
  require(std::find(experiment_ids().begin(), experiment_ids().end(), s.experiment_id) != experiment_ids().end(),
          "unknown experiment_id '" + s.experiment_id + "'");
  require(!s.samplers.empty(), "samplers must be non-empty");
  require(s.runs >= 1, "runs must be at least 1");
  require(s.chains >= 1, "chains must be at least 1");
  require(s.steps >= 0, "steps must be non-negative");
  require(s.record_every >= 1, "record_every must be positive");
  require(s.L > 0.0, "L must be positive");
  require(s.quantile > 0.0 && s.quantile < 1.0, "quantile must lie in (0, 1)");
  require(s.init_cov_scale > 0.0, "init_cov_scale must be positive");
  require(s.ula_step_delta_factor > 0.0, "ula_step_delta_factor must be positive");
  if (s.step_rule == StepRule::Explicit && s.experiment_id != "stepsize_accept") {
    require(s.step_sizes.size() == s.samplers.size(), "explicit step_sizes need one value per sampler");
    for (double h : s.step_sizes) require(h > 0.0, "step sizes must be positive");
  }
  const bool err = s.experiment_id == "gaussian_err" || s.experiment_id == "weakly_err";
  const bool dim = s.experiment_id == "gaussian_dim" || s.experiment_id == "weakly_dim";
  const bool weakly = s.experiment_id.rfind("weakly", 0) == 0;
  if (dim || err) {
    require(!s.dims.empty(), "dims must be non-empty");
    for (int d : s.dims) require(d >= (weakly ? 3 : 2), weakly ? "weakly sweeps need d >= 3" : "sweeps need d >= 2");
    require(s.kappa >= 1.0, "kappa must be at least 1");
    require(s.weak_var > 0.0 && s.interior_var > 0.0, "variances must be positive");
  }
  if (dim) require(s.delta > 0.0, "delta must be positive");
  if (err) {
    require(s.dims.size() == 1, "error sweeps take exactly one dimension");
    require(!s.deltas.empty(), "deltas must be non-empty");
    for (double d : s.deltas) require(d > 0.0, "deltas must be positive");
  }
  if (s.experiment_id == "mixture_tv") {
    require(!s.mixture_a.empty(), "mixture_a must be non-empty");
    require(s.bins >= 2, "bins must be at least 2");
    require(s.reference_samples >= 1 && s.reference_draws >= 1, "reference sizes must be positive");
    require(s.late_window >= 1, "late_window must be positive");
    for (double d : s.ula_deltas) require(d > 0.0, "ula_deltas must be positive");
  }
  if (s.experiment_id == "logistic") {
    require(s.dims.size() == 1 && s.dims.front() >= 1, "logistic takes exactly one dimension");
    require(s.n_obs >= 1 && s.alpha > 0.0 && s.x_norm > 0.0, "logistic data parameters must be positive");
    require(s.delta > 0.0, "delta must be positive");
  }
  if (s.experiment_id == "stepsize_accept") {
    require(!s.dims.empty(), "dims must be non-empty");
    for (int d : s.dims) require(d >= 2, "stepsize sweeps need d >= 2");
    require(s.window >= 1 && s.burn_in >= 0, "window must be positive");
    require(s.stepsize_target == "gaussian" || s.stepsize_target == "logistic",
            "stepsize_target must be gaussian or logistic");
  }
}

namespace {

// Output directory for one experiment; empty when nothing is written.
struct Sink {
  std::filesystem::path dir;
  std::vector<std::filesystem::path>* manifest;

  void write(const std::string& name, const std::string& contents) const {
    if (dir.empty()) return;
    write_text_file(dir / name, contents);
    manifest->push_back(dir / name);
  }
};

Sink make_sink(const RunOptions& options, ExperimentResult& result) {
  Sink sink{{}, &result.manifest};
  if (!options.out_dir.empty()) sink.dir = options.out_dir / result.spec.experiment_id;
  return sink;
}

void finish(const Sink& sink, const ExperimentResult& result) {
  if (sink.dir.empty()) return;
  CsvWriter summary({"key", "value"});
  for (const auto& [k, v] : result.scalars) summary.cell(k).cell(v).end_row();
  sink.write("summary.csv", summary.str());
  if (!result.warnings.empty()) {
    std::string w;
    for (const auto& line : result.warnings) w += line + "\n";
    sink.write("warnings.txt", w);
  }
  std::string m;
  for (const auto& p : *sink.manifest) m += p.filename().string() + "\n";
  m += "manifest.txt\n";
  write_text_file(sink.dir / "manifest.txt", m);
  sink.manifest->push_back(sink.dir / "manifest.txt");
}

double practical_step(SamplerId sampler, int d, double kappa, double L, double delta) {
  return theory::practical_step_size(sampler, d, kappa, L, delta);
}

// Step size for one sweep cell. `m_rule` is the strong convexity used by the
// rule (δ/(dL) for the weakly sweeps).
double choose_step(const ExperimentSpec& spec, std::size_t sampler_index, int d, double m_rule,
                   double delta, std::vector<std::string>& warnings) {
  const SamplerId sampler = spec.samplers[sampler_index];
  const double kappa = spec.L / m_rule;
  const double ula_delta = delta * spec.ula_step_delta_factor;
  switch (spec.step_rule) {
    case StepRule::Explicit:
      return spec.step_sizes[sampler_index];
    case StepRule::Bound: {
      if (sampler == SamplerId::ULA) {
        warnings.push_back("step_rule=bound has no ULA step; using the practical rule for ULA");
        return practical_step(sampler, d, kappa, spec.L, ula_delta);
      }
      theory::TheoryParams p;
      p.d = d;
      p.m = m_rule;
      p.L = spec.L;
      p.delta = std::min(1.0, delta);
      const auto [mala, mrw] = theory::feasible_start_bounds(p);
      return sampler == SamplerId::MALA ? mala.step_size : mrw.step_size;
    }
    case StepRule::Practical:
      break;
  }
  return practical_step(sampler, d, kappa, spec.L, sampler == SamplerId::ULA ? ula_delta : delta);
}

// ---------------------------------------------------------------------------
// Quantile-error sweeps.

struct QuantileTask {
  std::size_t sweep_index = 0;
  std::size_t sampler_index = 0;
  int dim = 0;
  double delta = 0.0;
};

struct QuantileOutcome {
  SweepPoint point;
  std::string run_rows;     // sampler,dim,delta,run,iteration,error
  std::string pooled_rows;  // sampler,dim,delta,iteration,error
  std::vector<std::string> warnings;
  diag::DiagnosticsReport pooled;
};

Target sweep_target(const ExperimentSpec& spec, int d, bool weakly, Vector& direction, double& truth) {
  Vector var(d);
  direction = Vector::Zero(d);
  const double z = diag::normal_quantile(spec.quantile);
  if (weakly) {
    var.setConstant(spec.interior_var);
    var[0] = spec.weak_var;
    var[d - 1] = 1.0;
    direction[1] = 1.0;
    truth = std::sqrt(spec.interior_var / spec.L) * z;
  } else {
    var = Vector::LinSpaced(d, spec.kappa, 1.0);
    direction[0] = 1.0;
    truth = std::sqrt(spec.kappa / spec.L) * z;
  }
  return diagonal_gaussian_target(var / spec.L);
}

QuantileOutcome run_quantile_task(const ExperimentSpec& spec, const QuantileTask& task, bool weakly,
                                  bool err_sweep) {
  QuantileOutcome out;
  Vector direction;
  double truth = 0.0;
  const Target target = sweep_target(spec, task.dim, weakly, direction, truth);
  const double m_rule = weakly ? task.delta / (task.dim * spec.L) : target.m();
  const SamplerId sampler = spec.samplers[task.sampler_index];
  const double h = choose_step(spec, task.sampler_index, task.dim, m_rule, task.delta, out.warnings);

  SweepPoint& pt = out.point;
  pt.sampler = sampler;
  pt.label = to_string(sampler);
  pt.dim = task.dim;
  pt.delta = task.delta;
  pt.h = h;
  pt.x = err_sweep ? 1.0 / task.delta : static_cast<double>(task.dim);
  pt.run_k_mix.assign(static_cast<std::size_t>(spec.runs), std::nullopt);

  const std::uint64_t seed = derive_seed(spec.master_seed, {task.sweep_index, static_cast<std::uint64_t>(sampler)});
  ChainOptions opts;
  opts.lazy = spec.lazy;
  const auto init = InitialDistribution::gaussian_at_mode(spec.init_cov_scale);
  std::vector<Ensemble> ens;
  ens.reserve(static_cast<std::size_t>(spec.runs));
  for (int r = 0; r < spec.runs; ++r) {
    ens.emplace_back(sampler, target, h, init, static_cast<std::size_t>(spec.chains),
                     derive_seed(seed, {static_cast<std::uint64_t>(r)}), opts);
  }

  out.pooled.metric_id = "quantile_error:" + pt.label;
  out.pooled.delta = task.delta;
  out.pooled.runs_averaged = static_cast<std::size_t>(spec.runs);
  const std::string prefix = pt.label + "," + std::to_string(task.dim) + "," + number(task.delta) + ",";
  std::vector<double> pooled, one;
  std::vector<double> run_err(static_cast<std::size_t>(spec.runs));
  std::size_t k = 0;
  for (;; ++k) {
    if (k > 0) {
      for (auto& e : ens) e.step();
    }
    pooled.clear();
    for (std::size_t r = 0; r < ens.size(); ++r) {
      one = ens[r].project(direction);
      pooled.insert(pooled.end(), one.begin(), one.end());
      if (one.empty()) {
        run_err[r] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      run_err[r] = std::abs(diag::quantile(std::span<double>(one), spec.quantile) - truth);
      if (!pt.run_k_mix[r] && run_err[r] <= task.delta) pt.run_k_mix[r] = k;
    }
    const double pooled_err = pooled.empty() ? std::numeric_limits<double>::quiet_NaN()
                                             : std::abs(diag::quantile(std::span<double>(pooled), spec.quantile) - truth);
    const bool pooled_hit = pooled_err <= task.delta;
    const bool all_runs_hit = std::all_of(pt.run_k_mix.begin(), pt.run_k_mix.end(), [](const auto& v) { return v.has_value(); });
    const bool done = (spec.kmix_mode == KmixMode::Pooled ? pooled_hit && !out.pooled.k_mix_hat : all_runs_hit) ||
                      k >= static_cast<std::size_t>(spec.steps);
    if (should_record(k, spec.record_every) || done) {
      out.pooled.push(k, pooled_err);
      out.pooled_rows += prefix;
      out.pooled_rows += std::to_string(k) + "," + number(pooled_err) + "\n";
      for (std::size_t r = 0; r < run_err.size(); ++r) {
        out.run_rows += prefix;
        out.run_rows += std::to_string(r) + "," + std::to_string(k) + "," + number(run_err[r]) + "\n";
      }
    } else if (pooled_hit && !out.pooled.k_mix_hat) {
      out.pooled.k_mix_hat = k;
    }
    if (done) break;
  }
  pt.iterations_run = k;
  for (const auto& e : ens) pt.diverged += e.n_diverged();

  if (spec.kmix_mode == KmixMode::Pooled) {
    if (out.pooled.k_mix_hat) pt.k_mix = static_cast<double>(*out.pooled.k_mix_hat);
  } else {
    double sum = 0.0;
    std::size_t hit = 0;
    for (const auto& v : pt.run_k_mix) {
      if (v) {
        sum += static_cast<double>(*v);
        ++hit;
      }
    }
    if (hit > 0) pt.k_mix = sum / static_cast<double>(hit);
    if (hit < pt.run_k_mix.size()) {
      out.warnings.push_back(pt.label + " d=" + std::to_string(task.dim) + " delta=" + number(task.delta) + ": " +
                             std::to_string(pt.run_k_mix.size() - hit) + " runs never reached the tolerance");
    }
  }
  if (!pt.k_mix) {
    out.warnings.push_back(pt.label + " d=" + std::to_string(task.dim) + " delta=" + number(task.delta) +
                           ": tolerance not reached within " + std::to_string(spec.steps) + " steps");
  }
  if (pt.diverged > 0) {
    out.warnings.push_back(pt.label + " d=" + std::to_string(task.dim) + " delta=" + number(task.delta) + ": " +
                           std::to_string(pt.diverged) + " chains diverged and were excluded");
  }
  return out;
}

ExperimentResult run_quantile_sweep(const ExperimentSpec& spec, const RunOptions& options) {
  const bool weakly = spec.experiment_id.rfind("weakly", 0) == 0;
  const bool err_sweep = spec.experiment_id.find("_err") != std::string::npos;
  ExperimentResult result;
  result.spec = spec;
  const Sink sink = make_sink(options, result);

  std::vector<QuantileTask> tasks;
  const std::size_t n_sweep = err_sweep ? spec.deltas.size() : spec.dims.size();
  for (std::size_t i = 0; i < n_sweep; ++i) {
    for (std::size_t s = 0; s < spec.samplers.size(); ++s) {
      QuantileTask t;
      t.sweep_index = i;
      t.sampler_index = s;
      t.dim = err_sweep ? spec.dims.front() : spec.dims[i];
      t.delta = err_sweep ? spec.deltas[i] : spec.delta;
      tasks.push_back(t);
    }
  }
  std::vector<QuantileOutcome> outcomes(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    outcomes[i] = run_quantile_task(spec, tasks[i], weakly, err_sweep);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& p = outcomes[i].point;
    log_line(options, "[" + spec.experiment_id + "] " + p.label + " d=" + std::to_string(p.dim) +
                          " delta=" + number(p.delta) + " h=" + number(p.h) + " k_mix=" +
                          (p.k_mix ? number(*p.k_mix) : std::string("none")) + " (" + number(std::round(secs * 10) / 10) + " s)");
  });

  std::string run_csv = "sampler,dim,delta,run,iteration,error\n";
  std::string pooled_csv = "sampler,dim,delta,iteration,error\n";
  CsvWriter kmix({"sampler", "dim", "delta", "x", "h", "k_mix", "runs_converged", "iterations_run", "diverged"});
  CsvWriter kmix_runs({"sampler", "dim", "delta", "run", "k_mix"});
  for (auto& o : outcomes) {
    run_csv += o.run_rows;
    pooled_csv += o.pooled_rows;
    for (auto& w : o.warnings) result.warnings.push_back(std::move(w));
    const auto& p = o.point;
    const auto converged = std::count_if(p.run_k_mix.begin(), p.run_k_mix.end(), [](const auto& v) { return v.has_value(); });
    kmix.cell(p.label).cell(static_cast<long long>(p.dim)).cell(p.delta).cell(p.x).cell(p.h);
    kmix.cell(p.k_mix ? *p.k_mix : std::numeric_limits<double>::quiet_NaN());
    kmix.cell(static_cast<long long>(converged)).cell(static_cast<long long>(p.iterations_run));
    kmix.cell(static_cast<long long>(p.diverged)).end_row();
    for (std::size_t r = 0; r < p.run_k_mix.size(); ++r) {
      kmix_runs.cell(p.label).cell(static_cast<long long>(p.dim)).cell(p.delta).cell(static_cast<long long>(r));
      kmix_runs.cell(p.run_k_mix[r] ? static_cast<double>(*p.run_k_mix[r]) : std::numeric_limits<double>::quiet_NaN());
      kmix_runs.end_row();
    }
    result.points.push_back(p);
    result.curves.push_back(std::move(o.pooled));
  }

  CsvWriter slopes({"sampler", "slope", "intercept", "r_squared", "n_points"});
  std::vector<diag::DiagnosticsReport> kmix_series;
  for (SamplerId s : spec.samplers) {
    std::vector<std::pair<double, double>> pts;
    diag::DiagnosticsReport series;
    series.metric_id = to_string(s);
    std::vector<std::pair<double, double>> sorted;
    for (const auto& p : result.points) {
      if (p.sampler == s && p.k_mix && *p.k_mix > 0.0) pts.emplace_back(p.x, *p.k_mix);
    }
    sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [x, y] : sorted) {
      // The plot uses integer abscissae; scale 1/δ by 100 to keep them distinct.
      series.iterations.push_back(static_cast<std::size_t>(std::llround(err_sweep ? x * 100.0 : x)));
      series.values.push_back(y);
    }
    kmix_series.push_back(series);
    if (pts.size() >= 2) {
      const auto fit = diag::loglog_slope(pts);
      result.slopes[to_string(s)] = fit;
      result.scalars["slope:" + to_string(s)] = fit.slope;
      slopes.cell(to_string(s)).cell(fit.slope).cell(fit.intercept).cell(fit.r_squared);
      slopes.cell(static_cast<long long>(pts.size())).end_row();
    } else {
      result.warnings.push_back(to_string(s) + ": fewer than two sweep points reached the tolerance; no slope");
    }
  }

  sink.write("spec.cfg", format_spec(spec));
  sink.write("kmix.csv", kmix.str());
  sink.write("kmix_runs.csv", kmix_runs.str());
  sink.write("quantile_error.csv", run_csv);
  sink.write("quantile_error_pooled.csv", pooled_csv);
  sink.write("slopes.csv", slopes.str());
  if (spec.write_svg) {
    diag::PlotOptions po;
    po.title = spec.experiment_id + ": approximate mixing time";
    po.x_label = err_sweep ? "100 / delta" : "dimension d";
    po.y_label = "k_mix";
    po.log_x = true;
    po.log_y = true;
    sink.write("kmix.svg", diag::svg_line_plot(kmix_series, po));
  }
  finish(sink, result);
  return result;
}

// ---------------------------------------------------------------------------
// Step size vs acceptance.

ExperimentResult run_stepsize(const ExperimentSpec& spec, const RunOptions& options) {
  ExperimentResult result;
  result.spec = spec;
  const Sink sink = make_sink(options, result);

  struct Task {
    SamplerId sampler;
    std::size_t sampler_index;
    double gamma;
    std::size_t gamma_index;
    int dim;
    std::size_t dim_index;
  };
  std::vector<Task> tasks;
  for (std::size_t si = 0; si < spec.samplers.size(); ++si) {
    const SamplerId s = spec.samplers[si];
    if (s == SamplerId::ULA) {
      result.warnings.push_back("ULA has no accept step; skipped in stepsize_accept");
      continue;
    }
    const auto& gammas = s == SamplerId::MALA ? spec.gammas_mala : spec.gammas_mrw;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      for (std::size_t di = 0; di < spec.dims.size(); ++di) tasks.push_back({s, si, gammas[gi], gi, spec.dims[di], di});
    }
  }
  struct Outcome {
    double h = 0.0, rate = 0.0;
    std::size_t diverged = 0;
    std::string warning;
  };
  std::vector<Outcome> outcomes(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    Target target = spec.stepsize_target == "logistic"
                        ? logistic_posterior(LogisticData::synthetic(
                              spec.n_obs, t.dim, spec.alpha, Vector::Ones(t.dim), spec.x_norm,
                              derive_seed(spec.master_seed, {99, static_cast<std::uint64_t>(t.dim)})))
                        : diagonal_gaussian_target(Vector::LinSpaced(t.dim, spec.kappa, 1.0) / spec.L);
    const double h = std::pow(static_cast<double>(t.dim), -t.gamma) / target.L();
    const std::uint64_t seed = derive_seed(spec.master_seed, {static_cast<std::uint64_t>(t.sampler), t.gamma_index, t.dim_index});
    ChainOptions opts;
    opts.lazy = spec.lazy;
    const std::size_t n = static_cast<std::size_t>(spec.runs) * static_cast<std::size_t>(spec.chains);
    Ensemble ens(t.sampler, target, h, InitialDistribution::gaussian_at_mode(spec.init_cov_scale), n, seed, opts);
    ens.advance(static_cast<std::size_t>(spec.burn_in));
    const auto before = ens.accept_counts();
    ens.advance(static_cast<std::size_t>(spec.window));
    const auto& after = ens.accept_counts();
    double acc = 0.0;
    std::size_t live = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (ens.diverged()[c]) continue;
      acc += static_cast<double>(after[c] - before[c]) / spec.window;
      ++live;
    }
    outcomes[i].h = h;
    outcomes[i].rate = live ? acc / static_cast<double>(live) : 0.0;
    outcomes[i].diverged = ens.n_diverged();
    if (!target.warnings().empty()) outcomes[i].warning = "d=" + std::to_string(t.dim) + ": " + target.warnings().front();
    log_line(options, "[stepsize_accept] " + to_string(t.sampler) + " gamma=" + number(t.gamma) + " d=" +
                          std::to_string(t.dim) + " acceptance=" + number(outcomes[i].rate));
  });

  CsvWriter csv({"sampler", "gamma", "dim", "h", "acceptance", "chains", "diverged"});
  std::map<std::string, diag::DiagnosticsReport> curves;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = tasks[i];
    const Outcome& o = outcomes[i];
    csv.cell(to_string(t.sampler)).cell(t.gamma).cell(static_cast<long long>(t.dim)).cell(o.h).cell(o.rate);
    csv.cell(static_cast<long long>(spec.runs) * spec.chains).cell(static_cast<long long>(o.diverged)).end_row();
    const std::string key = to_string(t.sampler) + ":gamma=" + number(t.gamma);
    result.scalars["acceptance:" + key + ":d=" + std::to_string(t.dim)] = o.rate;
    auto& c = curves[key];
    c.metric_id = key;
    c.push(static_cast<std::size_t>(t.dim), o.rate);
    if (!o.warning.empty() &&
        std::find(result.warnings.begin(), result.warnings.end(), o.warning) == result.warnings.end()) {
      result.warnings.push_back(o.warning);
    }
  }
  for (auto& [key, c] : curves) {
    result.scalars["min_acceptance:" + key] = *std::min_element(c.values.begin(), c.values.end());
    result.scalars["acceptance_at_max_d:" + key] = c.values.back();
    result.curves.push_back(c);
  }
  sink.write("spec.cfg", format_spec(spec));
  sink.write("acceptance.csv", csv.str());
  if (spec.write_svg) {
    for (SamplerId s : {SamplerId::MALA, SamplerId::MRW}) {
      std::vector<diag::DiagnosticsReport> sel;
      for (const auto& c : result.curves) {
        if (c.metric_id.rfind(to_string(s) + ":", 0) == 0) sel.push_back(c);
      }
      if (sel.empty()) continue;
      diag::PlotOptions po;
      po.title = to_string(s) + ": acceptance rate for h = d^-gamma / L";
      po.x_label = "dimension d";
      po.y_label = "acceptance rate";
      po.log_x = true;
      sink.write("acceptance_" + to_string(s) + ".svg", diag::svg_line_plot(sel, po));
    }
  }
  finish(sink, result);
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// Mixture.

ExperimentResult ula_variant_sweep(const ExperimentSpec& spec, const RunOptions& options) {
  validate(spec);
  ExperimentResult result;
  result.spec = spec;
  const Sink sink = make_sink(options, result);

  Vector a = Eigen::Map<const Vector>(spec.mixture_a.data(), static_cast<Eigen::Index>(spec.mixture_a.size()));
  const Target target = mixture_target(a);
  const int d = target.dim();
  // Principal directions: along a and orthogonal to it.
  std::vector<Vector> dirs;
  dirs.push_back(a / a.norm());
  if (d >= 2) {
    Vector u2 = Vector::Zero(d);
    u2[0] = -dirs[0][1];
    u2[1] = dirs[0][0];
    if (u2.norm() == 0.0) u2[1] = 1.0;
    dirs.push_back(u2 / u2.norm());
  }
  const auto n_ref = static_cast<std::size_t>(spec.reference_samples);
  const Matrix reference = exact_mixture_samples(a, derive_seed(spec.master_seed, {0x4ef}), n_ref);
  const auto ranges = diag::projection_ranges(reference, dirs);
  std::vector<std::vector<double>> ref_hist;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    std::vector<double> p(n_ref);
    for (std::size_t j = 0; j < n_ref; ++j) p[j] = dirs[i].dot(reference.col(static_cast<Eigen::Index>(j)));
    ref_hist.push_back(diag::histogram(p, ranges[i].first, ranges[i].second, spec.bins));
  }

  // Same-vs-same band: TV between pairs of independent exact draws.
  std::vector<double> band(static_cast<std::size_t>(spec.reference_draws));
  parallel_for(band.size(), options.threads, [&](std::size_t i) {
    const Matrix s1 = exact_mixture_samples(a, derive_seed(spec.master_seed, {0xba0d, i, 1}), n_ref);
    const Matrix s2 = exact_mixture_samples(a, derive_seed(spec.master_seed, {0xba0d, i, 2}), n_ref);
    band[i] = diag::discretized_tv(s1, s2, dirs, spec.bins, diag::projection_ranges(s1, dirs));
  });
  const double band_min = *std::min_element(band.begin(), band.end());
  const double band_max = *std::max_element(band.begin(), band.end());
  result.scalars["band_min"] = band_min;
  result.scalars["band_max"] = band_max;
  log_line(options, "[mixture_tv] same-vs-same band [" + number(band_min) + ", " + number(band_max) + "]");

  struct Variant {
    SamplerId sampler;
    std::string label;
    double delta;
  };
  std::vector<Variant> variants;
  for (SamplerId s : spec.samplers) {
    if (s == SamplerId::ULA) {
      for (double dl : spec.ula_deltas) variants.push_back({s, "ULA(delta=" + number(dl) + ")", dl});
    } else {
      variants.push_back({s, to_string(s), spec.delta});
    }
  }
  const double kappa = target.kappa();
  std::vector<diag::DiagnosticsReport> curves(variants.size());
  std::vector<SweepPoint> points(variants.size());
  parallel_for(variants.size(), options.threads, [&](std::size_t vi) {
    const Variant& v = variants[vi];
    const double h = theory::practical_step_size(v.sampler, d, kappa, target.L(), v.delta);
    ChainOptions opts;
    opts.lazy = spec.lazy;
    Ensemble ens(v.sampler, target, h, InitialDistribution::gaussian_at_mode(spec.init_cov_scale),
                 static_cast<std::size_t>(spec.chains), derive_seed(spec.master_seed, {0x7a, vi}), opts);
    auto& curve = curves[vi];
    curve.metric_id = v.label;
    for (std::size_t k = 0;; ++k) {
      if (k > 0) ens.step();
      if (should_record(k, spec.record_every) || k == static_cast<std::size_t>(spec.steps)) {
        double tv = 0.0;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
          const auto p = ens.project(dirs[i]);
          tv += diag::histogram_tv(diag::histogram(p, ranges[i].first, ranges[i].second, spec.bins), ref_hist[i]);
        }
        curve.push(k, tv);
      }
      if (k >= static_cast<std::size_t>(spec.steps)) break;
    }
    SweepPoint& pt = points[vi];
    pt.sampler = v.sampler;
    pt.label = v.label;
    pt.dim = d;
    pt.delta = v.delta;
    pt.h = h;
    pt.iterations_run = static_cast<std::size_t>(spec.steps);
    pt.diverged = ens.n_diverged();
    log_line(options, "[mixture_tv] " + v.label + " h=" + number(h) + " final TV=" + number(curve.values.back()));
  });

  std::optional<std::size_t> mala_entry;
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const auto& c = curves[vi];
    std::optional<std::size_t> entry;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      if (c.values[i] <= band_max) {
        entry = c.iterations[i];
        break;
      }
    }
    double late = 0.0;
    std::size_t n_late = 0;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      if (c.iterations[i] + static_cast<std::size_t>(spec.late_window) > static_cast<std::size_t>(spec.steps)) {
        late += c.values[i];
        ++n_late;
      }
    }
    const std::string& label = variants[vi].label;
    result.scalars["entry:" + label] = entry ? static_cast<double>(*entry) : std::numeric_limits<double>::quiet_NaN();
    result.scalars["plateau:" + label] = n_late ? late / static_cast<double>(n_late) : std::numeric_limits<double>::quiet_NaN();
    result.scalars["final_tv:" + label] = c.values.back();
    if (variants[vi].sampler == SamplerId::MALA) mala_entry = entry;
    if (entry) points[vi].k_mix = static_cast<double>(*entry);
    if (points[vi].diverged > 0) {
      result.warnings.push_back(label + ": " + std::to_string(points[vi].diverged) + " chains diverged and were excluded");
    }
  }
  if (mala_entry) {
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      const auto& c = curves[vi];
      const auto it = std::find(c.iterations.begin(), c.iterations.end(), *mala_entry);
      if (it != c.iterations.end()) {
        result.scalars["tv_at_mala_entry:" + variants[vi].label] = c.values[static_cast<std::size_t>(it - c.iterations.begin())];
      }
    }
  }

  // Trace plots and autocorrelation from single chains (default variants only).
  CsvWriter trace_csv({"sampler", "run", "iteration", "x_1"});
  CsvWriter acf_csv({"sampler", "lag", "acf"});
  std::vector<diag::DiagnosticsReport> acf_reports;
  const auto trace_steps = static_cast<std::size_t>(std::max(spec.steps, spec.burn_in + spec.max_lag + 1));
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const Variant& v = variants[vi];
    if (v.sampler == SamplerId::ULA && v.delta != spec.delta) continue;
    for (int r = 0; r < spec.trace_runs; ++r) {
      Trajectory traj;
      try {
        traj = run_chain(v.sampler, target, InitialDistribution::gaussian_at_mode(spec.init_cov_scale), points[vi].h,
                         trace_steps, derive_seed(spec.master_seed, {0x74, vi, static_cast<std::uint64_t>(r)}));
      } catch (const ChainDivergence& e) {
        result.warnings.push_back(v.label + " trace run " + std::to_string(r) + " diverged: " + e.what());
        continue;
      }
      for (Eigen::Index k = 0; k < traj.states.cols(); ++k) {
        trace_csv.cell(v.label).cell(static_cast<long long>(r)).cell(static_cast<long long>(k)).cell(traj.states(0, k)).end_row();
      }
      if (r == 0) {
        auto rep = diag::autocorrelation(traj, 0, static_cast<std::size_t>(spec.burn_in), static_cast<std::size_t>(spec.max_lag));
        rep.metric_id = v.label;
        for (std::size_t i = 0; i < rep.values.size(); ++i) {
          acf_csv.cell(v.label).cell(static_cast<long long>(rep.iterations[i])).cell(rep.values[i]).end_row();
        }
        if (rep.ess) result.scalars["ess:" + v.label] = *rep.ess;
        acf_reports.push_back(rep);
      }
    }
  }
  sink.write("trace.csv", trace_csv.str());
  sink.write("acf.csv", acf_csv.str());
  if (spec.write_svg && !acf_reports.empty()) {
    diag::PlotOptions po;
    po.title = "mixture: autocorrelation of x_1 after burn-in";
    po.x_label = "lag";
    po.y_label = "ACF";
    sink.write("acf.svg", diag::svg_line_plot(acf_reports, po));
  }
  result.points = std::move(points);
  result.curves = curves;

  CsvWriter tv_csv({"variant", "iteration", "tv"});
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.values.size(); ++i) tv_csv.cell(c.metric_id).cell(static_cast<long long>(c.iterations[i])).cell(c.values[i]).end_row();
  }
  CsvWriter band_csv({"draw", "tv"});
  for (std::size_t i = 0; i < band.size(); ++i) band_csv.cell(static_cast<long long>(i)).cell(band[i]).end_row();
  sink.write("spec.cfg", format_spec(spec));
  sink.write("tv.csv", tv_csv.str());
  sink.write("band.csv", band_csv.str());
  if (spec.write_svg) {
    diag::PlotOptions po;
    po.title = "mixture: discretized TV error (band: same-vs-same min/max)";
    po.y_label = "discretized TV";
    po.log_y = true;
    po.band = std::make_pair(band_min, band_max);
    sink.write("tv.svg", diag::svg_line_plot(curves, po));
  }
  finish(sink, result);
  return result;
}

// ---------------------------------------------------------------------------
// Logistic regression.

ExperimentResult logistic_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  validate(spec);
  ExperimentResult result;
  result.spec = spec;
  const Sink sink = make_sink(options, result);

  const int d = spec.dims.front();
  const Vector theta_star = Vector::Ones(d);
  const LogisticData data =
      LogisticData::synthetic(spec.n_obs, d, spec.alpha, theta_star, spec.x_norm, derive_seed(spec.master_seed, {0xda7a}));
  const Target plain = logistic_posterior(data);
  for (const auto& w : plain.warnings()) result.warnings.push_back(w);
  std::optional<PreconditionedTarget> pre;
  try {
    pre = precondition(data);
  } catch (const InvalidInput& e) {
    result.warnings.push_back(std::string("preconditioned variant skipped: ") + e.what());
  }
  result.scalars["L"] = plain.L();
  result.scalars["m"] = plain.m();
  result.scalars["kappa"] = plain.kappa();
  if (pre) {
    result.scalars["L_preconditioned"] = pre->target.L();
    result.scalars["kappa_preconditioned"] = pre->target.kappa();
  }

  struct Variant {
    SamplerId sampler;
    bool preconditioned;
    std::string label;
  };
  std::vector<Variant> variants;
  for (SamplerId s : spec.samplers) {
    variants.push_back({s, false, to_string(s)});
    if (pre) variants.push_back({s, true, to_string(s) + "(preconditioned)"});
  }

  struct Outcome {
    diag::DiagnosticsReport error, mean, q25, q75, acf;
    double h = 0.0;
    std::size_t diverged = 0;
    std::string warning;
  };
  std::vector<Outcome> outcomes(variants.size());
  parallel_for(variants.size(), options.threads, [&](std::size_t vi) {
    const Variant& v = variants[vi];
    const Target& target = v.preconditioned ? pre->target : plain;
    const Matrix back = v.preconditioned ? pre->to_original_map : Matrix::Identity(d, d);
    const double delta = v.sampler == SamplerId::ULA ? spec.delta * spec.ula_step_delta_factor : spec.delta;
    Outcome& o = outcomes[vi];
    o.h = theory::practical_step_size(v.sampler, d, target.kappa(), target.L(), delta);
    // μ₀ = N(0, L⁻¹ I) in the space the chain runs in.
    const auto init = InitialDistribution::gaussian_inexact(Vector::Zero(d), target.L(), 2.0 * spec.init_cov_scale);
    ChainOptions opts;
    opts.lazy = spec.lazy;
    Ensemble ens(v.sampler, target, o.h, init, static_cast<std::size_t>(spec.chains),
                 derive_seed(spec.master_seed, {0x10, vi}), opts);
    for (auto* r : {&o.error, &o.mean, &o.q25, &o.q75}) r->runs_averaged = ens.size();
    o.error.metric_id = v.label;
    o.mean.metric_id = v.label + ":mean";
    o.q25.metric_id = v.label + ":q25";
    o.q75.metric_id = v.label + ":q75";
    Matrix theta;
    std::vector<double> first;
    for (std::size_t k = 0;; ++k) {
      if (k > 0) ens.step();
      if (should_record(k, spec.record_every) || k == static_cast<std::size_t>(spec.steps)) {
        theta.noalias() = back * ens.states();
        Vector sum = Vector::Zero(d);
        first.clear();
        for (Eigen::Index c = 0; c < theta.cols(); ++c) {
          if (ens.diverged()[static_cast<std::size_t>(c)]) continue;
          sum += theta.col(c);
          first.push_back(theta(0, c) - theta_star[0]);
        }
        if (!first.empty()) {
          const Vector mean = sum / static_cast<double>(first.size());
          o.error.push(k, (mean - theta_star).lpNorm<1>() / d);
          o.mean.push(k, mean[0] - theta_star[0]);
          o.q25.push(k, diag::quantile(std::span<double>(first), 0.25));
          o.q75.push(k, diag::quantile(std::span<double>(first), 0.75));
        }
      }
      if (k >= static_cast<std::size_t>(spec.steps)) break;
    }
    o.diverged = ens.n_diverged();

    const auto n_acf = static_cast<std::size_t>(std::max(spec.steps, spec.burn_in + spec.max_lag + 1));
    try {
      Trajectory traj = run_chain(v.sampler, target, init, o.h, n_acf, derive_seed(spec.master_seed, {0xacf, vi}), opts);
      traj.states = back * traj.states;
      o.acf = diag::autocorrelation(traj, 0, static_cast<std::size_t>(spec.burn_in), static_cast<std::size_t>(spec.max_lag));
      o.acf.metric_id = v.label;
    } catch (const ChainDivergence& e) {
      o.warning = v.label + " autocorrelation chain diverged: " + e.what();
    }
    log_line(options, "[logistic] " + v.label + " h=" + number(o.h) + " e_final=" + number(o.error.values.back()));
  });

  CsvWriter err_csv({"variant", "iteration", "e_k"});
  CsvWriter q_csv({"variant", "iteration", "mean", "q25", "q75"});
  CsvWriter acf_csv({"variant", "lag", "acf"});
  CsvWriter steps_csv({"variant", "h", "diverged"});
  std::vector<diag::DiagnosticsReport> err_curves, acf_curves;
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const auto& o = outcomes[vi];
    const std::string& label = variants[vi].label;
    for (std::size_t i = 0; i < o.error.size(); ++i) {
      err_csv.cell(label).cell(static_cast<long long>(o.error.iterations[i])).cell(o.error.values[i]).end_row();
      q_csv.cell(label).cell(static_cast<long long>(o.mean.iterations[i])).cell(o.mean.values[i]);
      q_csv.cell(o.q25.values[i]).cell(o.q75.values[i]).end_row();
    }
    for (std::size_t i = 0; i < o.acf.size(); ++i) {
      acf_csv.cell(label).cell(static_cast<long long>(o.acf.iterations[i])).cell(o.acf.values[i]).end_row();
    }
    steps_csv.cell(label).cell(o.h).cell(static_cast<long long>(o.diverged)).end_row();
    if (!o.error.values.empty()) {
      double late = 0.0;
      std::size_t n_late = 0;
      for (std::size_t i = 0; i < o.error.size(); ++i) {
        if (o.error.iterations[i] + static_cast<std::size_t>(spec.late_window) > static_cast<std::size_t>(spec.steps)) {
          late += o.error.values[i];
          ++n_late;
        }
      }
      result.scalars["e_0:" + label] = o.error.values.front();
      result.scalars["e_final:" + label] = o.error.values.back();
      result.scalars["e_late:" + label] = n_late ? late / static_cast<double>(n_late) : o.error.values.back();
    }
    if (o.acf.ess) result.scalars["ess:" + label] = *o.acf.ess;
    if (o.diverged > 0) {
      result.warnings.push_back(label + ": " + std::to_string(o.diverged) + " chains diverged and were excluded");
    }
    if (!o.warning.empty()) result.warnings.push_back(o.warning);
    err_curves.push_back(o.error);
    if (o.acf.size() > 0) acf_curves.push_back(o.acf);
    SweepPoint pt;
    pt.sampler = variants[vi].sampler;
    pt.label = label;
    pt.dim = d;
    pt.delta = spec.delta;
    pt.h = o.h;
    pt.iterations_run = static_cast<std::size_t>(spec.steps);
    pt.diverged = o.diverged;
    result.points.push_back(pt);
    for (const auto* r : {&o.error, &o.mean, &o.q25, &o.q75}) result.curves.push_back(*r);
  }

  CsvWriter data_csv([&] {
    std::vector<std::string> h;
    for (int j = 0; j < d; ++j) h.push_back("x_" + std::to_string(j + 1));
    h.push_back("y");
    return h;
  }());
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < d; ++j) data_csv.cell(data.X(i, j));
    data_csv.cell(data.Y[i]).end_row();
  }
  sink.write("spec.cfg", format_spec(spec));
  sink.write("data.csv", data_csv.str());
  sink.write("step_sizes.csv", steps_csv.str());
  sink.write("mean_error.csv", err_csv.str());
  sink.write("theta_quantiles.csv", q_csv.str());
  sink.write("acf.csv", acf_csv.str());
  if (spec.write_svg) {
    diag::PlotOptions po;
    po.title = "logistic regression: l1 error of the mean";
    po.y_label = "e_k";
    po.log_x = true;
    po.log_y = true;
    sink.write("mean_error.svg", diag::svg_line_plot(err_curves, po));
    if (!acf_curves.empty()) {
      diag::PlotOptions pa;
      pa.title = "logistic regression: autocorrelation of theta_1";
      pa.x_label = "lag";
      pa.y_label = "ACF";
      sink.write("acf.svg", diag::svg_line_plot(acf_curves, pa));
    }
  }
  finish(sink, result);
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  validate(spec);
  const std::string& id = spec.experiment_id;
  if (id == "mixture_tv") return ula_variant_sweep(spec, options);
  if (id == "logistic") return logistic_experiment(spec, options);
  if (id == "stepsize_accept") return run_stepsize(spec, options);
  return run_quantile_sweep(spec, options);
}

}  // namespace lcmc
