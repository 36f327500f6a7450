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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcmc/diagnostics.hpp"
#include "lcmc/sampler_id.hpp"

namespace lcmc {

enum class StepRule { Practical, Bound, Explicit };
enum class KmixMode { Pooled, PerRun };

/// Declarative description of one experiment. Every field has a key of the
/// same name in the config format (see configs/ and the README).
struct ExperimentSpec {
  std::string experiment_id = "gaussian_dim";
  std::vector<SamplerId> samplers{SamplerId::ULA, SamplerId::MALA, SamplerId::MRW};
  StepRule step_rule = StepRule::Practical;
  std::vector<double> step_sizes;  // explicit rule: one per sampler

  // Quantile-error sweeps.
  std::vector<int> dims{2, 4, 8, 16, 32, 64};
  std::vector<double> deltas;  // error sweeps; tolerance and ULA accuracy
  double delta = 0.2;          // tolerance for dimension sweeps
  double ula_step_delta_factor = 1.0;  // ULA uses (factor·δ) in its step rule
  double kappa = 4.0;
  double L = 1.0;
  double weak_var = 1000.0;    // largest variance of the flat Gaussian
  double interior_var = 4.0;   // variance of the measured direction (weakly sweeps)
  int runs = 10;
  int chains = 1000;           // independent chains per run
  int steps = 10000;           // iteration budget
  int record_every = 10;       // CSV thinning after the first 100 iterations
  double quantile = 0.75;
  KmixMode kmix_mode = KmixMode::Pooled;
  bool lazy = false;
  double init_cov_scale = 1.0;
  std::uint64_t master_seed = 2026;

  // Mixture.
  std::vector<double> mixture_a{0.5, 0.5};
  std::vector<double> ula_deltas{0.1, 0.2, 1.0};
  int reference_samples = 250000;
  int reference_draws = 100;
  int bins = 100;
  int late_window = 200;
  int trace_runs = 10;

  // Logistic regression.
  int n_obs = 50;
  double alpha = 1.0;
  double x_norm = 1.0;
  int burn_in = 300;
  int max_lag = 50;

  // Step size vs acceptance.
  std::vector<double> gammas_mala{0.2, 0.33, 0.5, 0.67};
  std::vector<double> gammas_mrw{0.4, 0.67, 1.0, 1.33};
  int window = 100;
  std::string stepsize_target = "gaussian";  // gaussian | logistic

  bool write_svg = true;

  bool operator==(const ExperimentSpec&) const = default;
};

/// Known experiment ids, in preset order.
const std::vector<std::string>& experiment_ids();

/// Defaults for one experiment id. Throws InvalidInput for unknown ids.
ExperimentSpec preset(const std::string& experiment_id);

/// Starts from preset(experiment_id) (gaussian_dim when the key is absent)
/// and applies every key in the text. Unknown keys raise ParseError.
ExperimentSpec parse_spec(const std::string& text);
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Writes every field; parse_spec(format_spec(s)) == s.
std::string format_spec(const ExperimentSpec& spec);
void save_spec(const ExperimentSpec& spec, const std::filesystem::path& path);

/// Throws InvalidInput when a field is out of range.
void validate(const ExperimentSpec& spec);

/// One (sampler, sweep value) cell of a sweep.
struct SweepPoint {
  SamplerId sampler = SamplerId::MALA;
  std::string label;     // sampler name, or variant name such as ULA(delta=1)
  int dim = 0;
  double delta = 0.0;
  double h = 0.0;
  double x = 0.0;        // regression abscissa: d or 1/δ
  std::optional<double> k_mix;
  std::vector<std::optional<std::size_t>> run_k_mix;
  std::size_t iterations_run = 0;
  std::size_t diverged = 0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<SweepPoint> points;
  std::map<std::string, diagnostics::SlopeFit> slopes;
  std::map<std::string, double> scalars;
  std::vector<diagnostics::DiagnosticsReport> curves;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> manifest;
};

struct RunOptions {
  std::filesystem::path out_dir;  // empty: nothing is written
  unsigned threads = 0;
  bool verbose = false;
};

/// Runs the protocol named by spec.experiment_id and writes its CSVs (and
/// SVGs) under out_dir/<experiment_id>/.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Mixture target: ULA at each of spec.ula_deltas plus MALA and MRW,
/// discretized-TV curves against a reference sample and the same-vs-same band.
ExperimentResult ula_variant_sweep(const ExperimentSpec& spec, const RunOptions& options = {});

/// Synthetic logistic regression, plain and preconditioned.
ExperimentResult logistic_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

std::string to_string(StepRule rule);
std::string to_string(KmixMode mode);

}  // namespace lcmc
