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

// Command line front end: sample, bounds, verify, experiment.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "lcmc/error.hpp"
#include "lcmc/experiment.hpp"
#include "lcmc/io.hpp"
#include "lcmc/parallel.hpp"
#include "lcmc/samplers.hpp"
#include "lcmc/targets.hpp"
#include "lcmc/theory.hpp"
#include "lcmc/verify.hpp"

namespace {

using namespace lcmc;

struct Global {
  std::uint64_t seed = 2026;
  std::string out_dir;
  unsigned threads = 0;
  bool quiet = false;
};

struct SampleArgs {
  std::string sampler = "MALA";
  std::string target = "gaussian";
  int dim = 2;
  double kappa = 4.0;
  double h = 0.0;
  double delta = 0.2;
  std::size_t steps = 1000;
  std::string data;
  std::string out;
};

Target make_target(const SampleArgs& a) {
  if (a.target == "gaussian") return diagonal_gaussian_target(Vector::LinSpaced(a.dim, a.kappa, 1.0));
  if (a.target == "mixture") return mixture_target(Vector::Constant(a.dim, 0.5));
  if (a.target == "logistic") {
    const LogisticData data = a.data.empty()
                                  ? LogisticData::synthetic(50, a.dim, 1.0, Vector::Ones(a.dim), 1.0, 7)
                                  : LogisticData::from_csv(a.data, 1.0);
    return logistic_posterior(data);
  }
  throw InvalidInput("unknown target '" + a.target + "' (expected gaussian, mixture or logistic)");
}

int cmd_sample(const Global& g, const SampleArgs& a) {
  const SamplerId id = parse_sampler(a.sampler);
  const Target target = make_target(a);
  for (const auto& w : target.warnings()) std::cerr << "warning: " << w << "\n";
  const double h = a.h > 0.0 ? a.h : theory::practical_step_size(id, target.dim(), target.kappa(), target.L(), a.delta);
  const Trajectory traj = run_chain(id, target, InitialDistribution::gaussian_at_mode(), h, a.steps, g.seed);
  std::filesystem::path out = a.out;
  if (out.empty()) out = std::filesystem::path(g.out_dir.empty() ? "." : g.out_dir) / "chain.csv";
  traj.write_csv(out);
  if (!g.quiet) std::cerr << to_string(id) << " on " << target.name() << ": h=" << format_number(h) << ", wrote " << out.string() << "\n";
  return 0;
}

struct BoundsArgs {
  int d = 2;
  double m = 0.25;
  double L = 1.0;
  double delta = 0.1;
  double beta = 0.0;
  double nu = 1.0;
  double c = 1.0;
  double c_prime = 1.0;
};

int cmd_bounds(const Global& g, const BoundsArgs& a) {
  theory::TheoryParams p;
  p.d = a.d;
  p.m = a.m;
  p.L = a.L;
  p.delta = a.delta;
  p.nu = a.nu;
  p.c = a.c;
  p.c_prime = a.c_prime;
  std::vector<theory::BoundReport> rows;
  if (a.beta > 0.0) {
    p.beta = a.beta;
    rows.push_back(theory::mala_mixing_bound(p));
    rows.push_back(theory::mrw_mixing_bound(p));
  }
  const auto [mala, mrw] = theory::feasible_start_bounds(p);
  rows.push_back(mala);
  rows.push_back(mrw);
  rows.push_back(theory::weakly_logconcave_plan(p).report);
  CsvWriter csv({"formula_id", "step_size", "mixing_steps", "inputs"});
  for (const auto& r : rows) {
    std::string inputs = "d=" + std::to_string(r.inputs.d) + ";m=" + format_number(r.inputs.m) +
                         ";L=" + format_number(r.inputs.L) + ";delta=" + format_number(r.inputs.delta) +
                         ";beta=" + format_number(r.inputs.beta) + ";nu=" + format_number(r.inputs.nu) +
                         ";c=" + format_number(r.inputs.c) + ";c_prime=" + format_number(r.inputs.c_prime);
    csv.cell(r.formula_id).cell(r.step_size).cell(r.mixing_steps).cell(inputs).end_row();
  }
  for (SamplerId s : {SamplerId::ULA, SamplerId::MALA, SamplerId::MRW}) {
    csv.cell("practical_" + to_string(s)).cell(theory::practical_step_size(s, a.d, a.L / a.m, a.L, a.delta));
    csv.cell(std::numeric_limits<double>::quiet_NaN());
    csv.cell("d=" + std::to_string(a.d) + ";kappa=" + format_number(a.L / a.m) + ";L=" + format_number(a.L) +
             ";delta=" + format_number(a.delta)).end_row();
  }
  if (g.out_dir.empty()) {
    std::cout << csv.str();
  } else {
    csv.save(std::filesystem::path(g.out_dir) / "bounds.csv");
  }
  return 0;
}

int cmd_verify(const Global& g) {
  const auto results = verify::run_suite(g.seed, g.threads);
  const std::string csv = verify::results_csv(results);
  if (g.out_dir.empty()) {
    std::cout << csv;
  } else {
    write_text_file(std::filesystem::path(g.out_dir) / "verify.csv", csv);
  }
  std::size_t failed = 0;
  for (const auto& r : results) {
    if (!r.passed) {
      ++failed;
      std::cerr << "FAIL " << r.name << ": observed " << format_number(r.observed) << " vs bound "
                << format_number(r.bound) << (r.detail.empty() ? "" : " (" + r.detail + ")") << "\n";
    }
  }
  if (!g.quiet) std::cerr << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}

int cmd_experiment(const Global& g, const std::string& which, bool seed_given) {
  ExperimentSpec spec;
  const auto& ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), which) != ids.end()) {
    spec = preset(which);
  } else if (std::filesystem::exists(which)) {
    spec = load_spec(which);
  } else {
    throw InvalidInput("'" + which + "' is neither an experiment id nor a config file");
  }
  if (seed_given) spec.master_seed = g.seed;
  RunOptions opts;
  opts.out_dir = g.out_dir.empty() ? std::filesystem::path("results") : std::filesystem::path(g.out_dir);
  opts.threads = g.threads;
  opts.verbose = !g.quiet;
  const auto result = run_experiment(spec, opts);
  for (const auto& [k, v] : result.scalars) std::cout << k << " = " << format_number(v) << "\n";
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  if (!g.quiet) std::cerr << "wrote " << result.manifest.size() << " files under " << (opts.out_dir / spec.experiment_id).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Langevin and random-walk Metropolis samplers for log-concave targets"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_option("--threads", g.threads, "Worker threads (0: hardware concurrency)");
  app.add_flag("-q,--quiet", g.quiet, "Suppress progress output");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Run one chain and write it as CSV");
  sample->add_option("--sampler", sa.sampler, "ULA, MALA or MRW")->capture_default_str();
  sample->add_option("--target", sa.target, "gaussian, mixture or logistic")->capture_default_str();
  sample->add_option("--dim", sa.dim, "Dimension")->capture_default_str()->check(CLI::PositiveNumber);
  sample->add_option("--kappa", sa.kappa, "Condition number of the Gaussian target")->capture_default_str();
  sample->add_option("--step-size", sa.h, "Step size (default: practical rule)");
  sample->add_option("--delta", sa.delta, "Accuracy used by the practical step rule")->capture_default_str();
  sample->add_option("--steps", sa.steps, "Number of steps")->capture_default_str();
  sample->add_option("--data", sa.data, "Logistic data CSV (x_1..x_d, y)");
  sample->add_option("--out", sa.out, "Output CSV (default <out-dir>/chain.csv)");

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Evaluate step sizes and mixing-time bounds");
  bounds->add_option("--dim", ba.d, "Dimension")->capture_default_str();
  bounds->add_option("--m", ba.m, "Strong convexity")->capture_default_str();
  bounds->add_option("--L", ba.L, "Smoothness")->capture_default_str();
  bounds->add_option("--delta", ba.delta, "TV accuracy")->capture_default_str();
  bounds->add_option("--beta", ba.beta, "Warmness; adds the warm-start bounds when given");
  bounds->add_option("--nu", ba.nu, "Fourth-moment scale for the weakly log-concave plan")->capture_default_str();
  bounds->add_option("--c", ba.c, "Step-size constant")->capture_default_str();
  bounds->add_option("--c-prime", ba.c_prime, "Iteration constant")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "Run the property suite; nonzero exit on failure");

  std::string which;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment preset or config file");
  experiment->add_option("id_or_config", which, "Experiment id or path to a config file")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sample) return cmd_sample(g, sa);
    if (*bounds) return cmd_bounds(g, ba);
    if (*verify_cmd) return cmd_verify(g);
    if (*experiment) return cmd_experiment(g, which, seed_opt->count() > 0);
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
