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

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "lcmc/diagnostics.hpp"
#include "lcmc/error.hpp"
#include "lcmc/random.hpp"
#include "lcmc/samplers.hpp"

namespace lcmc::diagnostics {
namespace {

Trajectory constant_trajectory(int d, int cols, double value, SamplerId sampler = SamplerId::MALA) {
  Trajectory t;
  t.sampler = sampler;
  t.states = Matrix::Constant(d, cols, value);
  t.accepted.assign(static_cast<std::size_t>(cols - 1), 1);
  return t;
}

std::vector<double> ar1(double phi, std::size_t n, std::uint64_t seed) {
  Stream rng(seed);
  std::vector<double> x(n);
  double v = 0.0;
  for (auto& xi : x) {
    v = phi * v + std::sqrt(1.0 - phi * phi) * rng.normal();
    xi = v;
  }
  return x;
}

TEST(Quantile, InterpolatesLinearly) {
  EXPECT_DOUBLE_EQ(quantile(std::vector<double>{4, 1, 3, 2, 5}, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile(std::vector<double>{1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(std::vector<double>{1, 2, 3, 4}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(std::vector<double>{1, 2, 3, 4}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(std::vector<double>{10, 0}, 0.25), 2.5);
  EXPECT_THROW(quantile(std::vector<double>{}, 0.5), InvalidInput);
  EXPECT_THROW(quantile(std::vector<double>{1}, 1.5), InvalidInput);
}

TEST(Quantile, NormalQuantile) {
  EXPECT_NEAR(normal_quantile(0.75), 0.6744897501960817, 1e-12);
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-12);
  EXPECT_THROW(normal_quantile(1.0), InvalidInput);
}

TEST(QuantileError, ConstantRunsAndMixingTime) {
  std::vector<Trajectory> runs;
  for (int i = 0; i < 5; ++i) {
    Trajectory t = constant_trajectory(2, 4, 0.0);
    for (int k = 0; k < 4; ++k) t.states.col(k).setConstant(1.0 / (k + 1));
    runs.push_back(t);
  }
  Vector e1 = Vector::Unit(2, 0);
  const auto rep = quantile_error(runs, e1, 0.5, 0.0, 0.3);
  ASSERT_EQ(rep.size(), 4u);
  EXPECT_DOUBLE_EQ(rep.values[1], 0.5);
  ASSERT_TRUE(rep.k_mix_hat.has_value());
  EXPECT_EQ(*rep.k_mix_hat, 3u);
  EXPECT_EQ(rep.runs_averaged, 5u);
  EXPECT_THROW(quantile_error(runs, Vector::Ones(2), 0.5, 0.0), InvalidInput);
  EXPECT_THROW(quantile_error(std::span(runs).first(1), e1, 0.5, 0.0), InvalidInput);
}

TEST(Tv, HistogramsOfIdenticalAndDisjointSamples) {
  Matrix a(1, 4), b(1, 4);
  a << 0.1, 0.2, 0.3, 0.4;
  b << 10.1, 10.2, 10.3, 10.4;
  const std::vector<Vector> dirs{Vector::Ones(1)};
  EXPECT_DOUBLE_EQ(discretized_tv(a, a, dirs, 10), 0.0);
  // One TV of 1 per direction, summed.
  const std::vector<Vector> two{Vector::Ones(1), -Vector::Ones(1)};
  EXPECT_DOUBLE_EQ(discretized_tv(a, b, two, 10), 2.0);
  const std::vector<std::pair<double, double>> ranges{{0.0, 1.0}};
  EXPECT_DOUBLE_EQ(discretized_tv(a, a, dirs, 4, ranges), 0.0);
}

TEST(Tv, HistogramBasics) {
  const std::vector<double> v{0.0, 0.49, 0.51, 1.0, 5.0};
  const auto h = histogram(v, 0.0, 1.0, 2);
  EXPECT_DOUBLE_EQ(h[0], 0.4);
  EXPECT_DOUBLE_EQ(h[1], 0.6);
  const std::vector<double> p{0.5, 0.5}, q{1.0, 0.0};
  EXPECT_DOUBLE_EQ(histogram_tv(p, q), 0.5);
  EXPECT_THROW(histogram(v, 0.0, 1.0, 1), InvalidInput);
}

TEST(Autocorrelation, Ar1MatchesPowers) {
  const double phi = 0.7;
  const auto x = ar1(phi, 200000, 17);
  const auto rho = acf(x, 6);
  for (std::size_t k = 0; k <= 6; ++k) EXPECT_NEAR(rho[k], std::pow(phi, static_cast<double>(k)), 0.02);
  const double ess = effective_sample_size(x, 50);
  EXPECT_LE(ess, static_cast<double>(x.size()));
  EXPECT_NEAR(ess / x.size(), (1.0 - phi) / (1.0 + phi), 0.03);
}

TEST(Autocorrelation, IndependentSeriesEssNearN) {
  const auto x = ar1(0.0, 50000, 5);
  EXPECT_GT(effective_sample_size(x, 20), 0.85 * x.size());
  EXPECT_LE(effective_sample_size(x, 20), 50000.0);
}

TEST(Autocorrelation, ReportCarriesEss) {
  Trajectory t = constant_trajectory(1, 200, 0.0);
  const auto x = ar1(0.5, 200, 1);
  for (int k = 0; k < 200; ++k) t.states(0, k) = x[k];
  const auto rep = autocorrelation(t, 0, 20, 10);
  EXPECT_EQ(rep.size(), 11u);
  ASSERT_TRUE(rep.ess.has_value());
  EXPECT_LE(*rep.ess, 180.0);
  EXPECT_THROW(autocorrelation(t, 1, 0, 10), InvalidInput);
  EXPECT_THROW(autocorrelation(t, 0, 195, 10), InvalidInput);
}

TEST(Slope, ExactOnPowerLaw) {
  std::vector<std::pair<double, double>> pts;
  for (double x : {1.0, 2.0, 5.0, 10.0}) pts.emplace_back(x, 3.0 * std::pow(x, 1.5));
  const auto fit = loglog_slope(pts);
  EXPECT_NEAR(fit.slope, 1.5, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  pts.emplace_back(0.0, 1.0);
  EXPECT_THROW(loglog_slope(pts), InvalidInput);
}

TEST(MeanError, AveragesRunsThenTakesL1) {
  std::vector<Trajectory> runs{constant_trajectory(2, 3, 1.0), constant_trajectory(2, 3, 1.2)};
  Vector theta(2);
  theta << 1.0, 1.2;
  const std::vector<std::size_t> at{0, 2};
  const auto rep = l1_mean_error(runs, theta, at);
  ASSERT_EQ(rep.size(), 2u);
  // Mean is 1.1 in both coordinates; |0.1| + |−0.1| over d = 2.
  EXPECT_NEAR(rep.values[0], 0.1, 1e-15);
  EXPECT_EQ(rep.iterations[1], 2u);
  const std::vector<std::size_t> beyond{3};
  EXPECT_THROW(l1_mean_error(runs, theta, beyond), InvalidInput);
}

TEST(Acceptance, WindowedRate) {
  Trajectory t = constant_trajectory(1, 11, 0.0);
  for (std::size_t i = 0; i < 10; ++i) t.accepted[i] = i % 2;
  EXPECT_DOUBLE_EQ(acceptance_rate(t, 0, 10), 0.5);
  EXPECT_DOUBLE_EQ(acceptance_rate(t, 1, 1), 1.0);
  EXPECT_THROW(acceptance_rate(t, 5, 10), InvalidInput);
  EXPECT_THROW(acceptance_rate(constant_trajectory(1, 11, 0.0, SamplerId::ULA), 0, 5), InvalidInput);
}

TEST(Trace, CopiesCoordinate) {
  Trajectory t = constant_trajectory(2, 4, 0.0);
  t.states.row(1) << 1, 2, 3, 4;
  const auto rep = trace(t, 1);
  EXPECT_EQ(rep.metric_id, "trace_x2");
  EXPECT_EQ(rep.values, (std::vector<double>{1, 2, 3, 4}));
  const std::vector<DiagnosticsReport> reps{rep};
  const auto csv = reports_csv(reps);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Plot, SvgIsWellFormed) {
  DiagnosticsReport a;
  a.metric_id = "a";
  for (std::size_t k = 1; k <= 10; ++k) a.push(k, 1.0 / k);
  PlotOptions opt;
  opt.title = "decay";
  opt.log_x = opt.log_y = true;
  opt.band = std::make_pair(0.1, 0.2);
  const std::vector<DiagnosticsReport> series{a};
  const auto svg = svg_line_plot(series, opt);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("decay"), std::string::npos);
}

}  // namespace
}  // namespace lcmc::diagnostics
