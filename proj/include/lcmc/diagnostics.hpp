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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lcmc/samplers.hpp"
#include "lcmc/targets.hpp"

namespace lcmc::diagnostics {

/// A metric series (iteration, value) plus the approximate mixing time:
/// the first recorded iteration whose value is at most `delta`.
struct DiagnosticsReport {
  std::string metric_id;
  std::vector<std::size_t> iterations;
  std::vector<double> values;
  std::optional<std::size_t> k_mix_hat;
  std::size_t runs_averaged = 1;
  double delta = 0.0;
  std::optional<double> ess;  // autocorrelation reports only

  /// Appends a point; sets k_mix_hat on the first value ≤ delta when delta > 0.
  void push(std::size_t iteration, double value);
  std::size_t size() const { return values.size(); }
};

/// Linear-interpolated order statistic: v[⌊p⌋] + (p - ⌊p⌋)(v[⌊p⌋+1] - v[⌊p⌋]),
/// p = q(n - 1). Reorders `values`.
double quantile(std::span<double> values, double q);
double quantile(std::vector<double> values, double q);

/// Quantile q of a standard normal.
double normal_quantile(double q);

/// |empirical q-quantile of the k-th states projected on `direction`,
/// taken across trajectories| - truth, for every iteration k.
DiagnosticsReport quantile_error(std::span<const Trajectory> trajectories, ConstVectorRef direction,
                                 double q, double truth, double delta = 0.0);

/// Normalized histogram of `values` on [lo, hi] with `bins` equal bins;
/// values outside the range go to the edge bins.
std::vector<double> histogram(std::span<const double> values, double lo, double hi, int bins);

/// ½Σ|p - q| of two normalized histograms.
double histogram_tv(std::span<const double> p, std::span<const double> q);

/// Sum over directions of the binned TV between the projected sample sets
/// (one sample per column). Bin ranges default to the min/max of both sets
/// together; pass `ranges` to pin them (e.g. to the reference sample).
double discretized_tv(const Matrix& samples_a, const Matrix& samples_b,
                      std::span<const Vector> directions, int bins,
                      std::span<const std::pair<double, double>> ranges = {});

/// [min, max] of the projections of `samples` on each direction.
std::vector<std::pair<double, double>> projection_ranges(const Matrix& samples,
                                                         std::span<const Vector> directions);

/// Sample ACF at lags 0..max_lag.
std::vector<double> acf(std::span<const double> series, std::size_t max_lag);

/// N / (1 + 2Σρ_k), the sum truncated before the first negative ρ_k; at most N.
double effective_sample_size(std::span<const double> series, std::size_t max_lag);

/// ACF of one coordinate after burn-in, with ESS attached.
DiagnosticsReport autocorrelation(const Trajectory& trajectory, int coordinate,
                                  std::size_t burn_in, std::size_t max_lag);

/// e_k = (1/d)‖θ̂_k - θ*‖₁ with θ̂_k the mean over trajectories of the k-th state.
DiagnosticsReport l1_mean_error(std::span<const Trajectory> trajectories, ConstVectorRef theta_star,
                                std::span<const std::size_t> at_iterations);

/// Fraction of accepted proposals in steps burn_in+1 .. burn_in+window.
double acceptance_rate(const Trajectory& trajectory, std::size_t burn_in, std::size_t window);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log y on log x.
SlopeFit loglog_slope(std::span<const std::pair<double, double>> points);

/// (k, x_coordinate) for every state.
DiagnosticsReport trace(const Trajectory& trajectory, int coordinate);

/// Long-format CSV: metric_id, iteration, value.
std::string reports_csv(std::span<const DiagnosticsReport> reports);

struct PlotOptions {
  std::string title;
  std::string x_label = "iteration";
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  /// Optional horizontal band [lo, hi], e.g. a reference envelope.
  std::optional<std::pair<double, double>> band;
};

/// Self-contained SVG line plot, one polyline per report.
std::string svg_line_plot(std::span<const DiagnosticsReport> series, const PlotOptions& options);

}  // namespace lcmc::diagnostics
