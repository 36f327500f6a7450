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

#include "lcmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <tuple>

#include <boost/math/distributions/normal.hpp>

#include "lcmc/error.hpp"
#include "lcmc/io.hpp"

namespace lcmc::diagnostics {

void DiagnosticsReport::push(std::size_t iteration, double value) {
  if (!iterations.empty() && iteration <= iterations.back()) {
    throw InvalidInput("report iterations must be strictly increasing");
  }
  iterations.push_back(iteration);
  values.push_back(value);
  if (delta > 0.0 && !k_mix_hat && value <= delta) k_mix_hat = iteration;
}

double quantile(std::span<double> values, double q) {
  if (values.empty()) throw InvalidInput("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("quantile level must lie in [0, 1]");
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double v_lo = values[lo];
  if (frac == 0.0 || lo + 1 >= values.size()) return v_lo;
  const double v_hi = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return v_lo + frac * (v_hi - v_lo);
}

double quantile(std::vector<double> values, double q) { return quantile(std::span<double>(values), q); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("normal quantile level must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), q);
}

DiagnosticsReport quantile_error(std::span<const Trajectory> trajectories, ConstVectorRef direction,
                                 double q, double truth, double delta) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidInput("quantile level must lie in (0, 1)");
  if (trajectories.size() < 2) throw InvalidInput("quantile error needs at least two runs");
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw InvalidInput("direction must be a unit vector");
  const Eigen::Index steps = trajectories.front().states.cols();
  for (const auto& t : trajectories) {
    if (t.states.cols() != steps || t.states.rows() != direction.size()) {
      throw InvalidInput("trajectories must share length and dimension");
    }
  }
  DiagnosticsReport rep;
  rep.metric_id = "quantile_error";
  rep.delta = delta;
  rep.runs_averaged = trajectories.size();
  std::vector<double> proj(trajectories.size());
  for (Eigen::Index k = 0; k < steps; ++k) {
    for (std::size_t r = 0; r < trajectories.size(); ++r) proj[r] = direction.dot(trajectories[r].states.col(k));
    rep.push(static_cast<std::size_t>(k), std::abs(quantile(std::span<double>(proj), q) - truth));
  }
  return rep;
}

std::vector<double> histogram(std::span<const double> values, double lo, double hi, int bins) {
  if (bins < 2) throw InvalidInput("need at least two bins");
  if (values.empty()) throw InvalidInput("histogram of an empty sample");
  std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
  const double width = hi > lo ? (hi - lo) / bins : 1.0;
  for (double v : values) {
    long b = hi > lo ? static_cast<long>(std::floor((v - lo) / width)) : 0;
    if (std::isnan(v)) continue;
    b = std::clamp<long>(b, 0, bins - 1);
    h[static_cast<std::size_t>(b)] += 1.0;
  }
  const double total = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& x : h) x /= total;
  return h;
}

double histogram_tv(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidInput("histograms have different bin counts");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

namespace {

std::vector<double> project(const Matrix& samples, const Vector& u) {
  std::vector<double> out(static_cast<std::size_t>(samples.cols()));
  for (Eigen::Index j = 0; j < samples.cols(); ++j) out[static_cast<std::size_t>(j)] = u.dot(samples.col(j));
  return out;
}

}  // namespace

std::vector<std::pair<double, double>> projection_ranges(const Matrix& samples,
                                                         std::span<const Vector> directions) {
  if (samples.cols() == 0) throw InvalidInput("empty sample set");
  std::vector<std::pair<double, double>> out;
  for (const Vector& u : directions) {
    if (u.size() != samples.rows()) throw InvalidInput("direction has wrong dimension");
    const auto p = project(samples, u);
    const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    out.emplace_back(*mn, *mx);
  }
  return out;
}

double discretized_tv(const Matrix& samples_a, const Matrix& samples_b,
                      std::span<const Vector> directions, int bins,
                      std::span<const std::pair<double, double>> ranges) {
  if (samples_a.cols() == 0 || samples_b.cols() == 0) throw InvalidInput("empty sample set");
  if (samples_a.rows() != samples_b.rows()) throw InvalidInput("sample sets differ in dimension");
  if (!ranges.empty() && ranges.size() != directions.size()) {
    throw InvalidInput("need one range per direction");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const Vector& u = directions[i];
    if (u.size() != samples_a.rows()) throw InvalidInput("direction has wrong dimension");
    const auto pa = project(samples_a, u);
    const auto pb = project(samples_b, u);
    double lo, hi;
    if (!ranges.empty()) {
      std::tie(lo, hi) = ranges[i];
    } else {
      const auto [amin, amax] = std::minmax_element(pa.begin(), pa.end());
      const auto [bmin, bmax] = std::minmax_element(pb.begin(), pb.end());
      lo = std::min(*amin, *bmin);
      hi = std::max(*amax, *bmax);
    }
    total += histogram_tv(histogram(pa, lo, hi, bins), histogram(pb, lo, hi, bins));
  }
  return total;
}

std::vector<double> acf(std::span<const double> series, std::size_t max_lag) {
  const std::size_t n = series.size();
  if (n <= max_lag) throw InvalidInput("series is shorter than the requested lag");
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  std::vector<double> rho(max_lag + 1, 0.0);
  rho[0] = 1.0;
  if (c0 == 0.0) return rho;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double ck = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) ck += (series[t] - mean) * (series[t + k] - mean);
    rho[k] = ck / c0;
  }
  return rho;
}

double effective_sample_size(std::span<const double> series, std::size_t max_lag) {
  const auto rho = acf(series, max_lag);
  double s = 0.0;
  for (std::size_t k = 1; k < rho.size(); ++k) {
    if (rho[k] < 0.0) break;
    s += rho[k];
  }
  const double n = static_cast<double>(series.size());
  return std::min(n, n / (1.0 + 2.0 * s));
}

DiagnosticsReport autocorrelation(const Trajectory& trajectory, int coordinate,
                                  std::size_t burn_in, std::size_t max_lag) {
  if (coordinate < 0 || coordinate >= trajectory.dim()) throw InvalidInput("coordinate out of range");
  const auto len = static_cast<std::size_t>(trajectory.states.cols());
  if (len <= burn_in + max_lag) throw InvalidInput("trajectory too short for burn-in and lag");
  std::vector<double> series;
  series.reserve(len - burn_in);
  for (std::size_t k = burn_in; k < len; ++k) {
    series.push_back(trajectory.states(coordinate, static_cast<Eigen::Index>(k)));
  }
  DiagnosticsReport rep;
  rep.metric_id = "acf";
  const auto rho = acf(series, max_lag);
  for (std::size_t k = 0; k < rho.size(); ++k) rep.push(k, rho[k]);
  rep.ess = effective_sample_size(series, max_lag);
  return rep;
}

DiagnosticsReport l1_mean_error(std::span<const Trajectory> trajectories, ConstVectorRef theta_star,
                                std::span<const std::size_t> at_iterations) {
  if (trajectories.empty()) throw InvalidInput("l1 mean error needs at least one run");
  const Eigen::Index d = theta_star.size();
  DiagnosticsReport rep;
  rep.metric_id = "l1_mean_error";
  rep.runs_averaged = trajectories.size();
  for (std::size_t k : at_iterations) {
    Vector mean = Vector::Zero(d);
    for (const auto& t : trajectories) {
      if (t.states.rows() != d) throw InvalidInput("trajectory dimension does not match theta_star");
      if (static_cast<Eigen::Index>(k) >= t.states.cols()) throw InvalidInput("iteration beyond trajectory");
      mean += t.states.col(static_cast<Eigen::Index>(k));
    }
    mean /= static_cast<double>(trajectories.size());
    rep.push(k, (mean - theta_star).lpNorm<1>() / static_cast<double>(d));
  }
  return rep;
}

double acceptance_rate(const Trajectory& trajectory, std::size_t burn_in, std::size_t window) {
  if (trajectory.sampler == SamplerId::ULA) throw InvalidInput("ULA has no accept step");
  if (window == 0) throw InvalidInput("window must be positive");
  if (trajectory.steps() < burn_in + window) throw InvalidInput("trajectory too short for the window");
  std::size_t acc = 0;
  for (std::size_t i = burn_in; i < burn_in + window; ++i) acc += trajectory.accepted[i];
  return static_cast<double>(acc) / static_cast<double>(window);
}

SlopeFit loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw InvalidInput("slope fit needs at least two points");
  std::vector<double> lx, ly;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw InvalidInput("log-log fit needs positive values");
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const double n = static_cast<double>(points.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("slope fit needs distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

DiagnosticsReport trace(const Trajectory& trajectory, int coordinate) {
  if (coordinate < 0 || coordinate >= trajectory.dim()) throw InvalidInput("coordinate out of range");
  DiagnosticsReport rep;
  rep.metric_id = "trace_x" + std::to_string(coordinate + 1);
  for (Eigen::Index k = 0; k < trajectory.states.cols(); ++k) {
    rep.push(static_cast<std::size_t>(k), trajectory.states(coordinate, k));
  }
  return rep;
}

std::string reports_csv(std::span<const DiagnosticsReport> reports) {
  CsvWriter csv({"metric_id", "iteration", "value"});
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      csv.cell(r.metric_id).cell(static_cast<long long>(r.iterations[i])).cell(r.values[i]);
      csv.end_row();
    }
  }
  return csv.str();
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

std::string svg_line_plot(std::span<const DiagnosticsReport> series, const PlotOptions& options) {
  constexpr double W = 720, H = 440, left = 70, right = 170, top = 40, bottom = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  auto tx = [&](double x) { return options.log_x ? std::log10(x) : x; };
  auto ty = [&](double y) { return options.log_y ? std::log10(y) : y; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!options.log_x || x > 0) && (!options.log_y || y > 0);
  };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const double x = static_cast<double>(s.iterations[i]), y = s.values[i];
      if (!usable(x, y)) continue;
      xmin = std::min(xmin, tx(x));
      xmax = std::max(xmax, tx(x));
      ymin = std::min(ymin, ty(y));
      ymax = std::max(ymax, ty(y));
    }
  }
  if (options.band) {
    for (double b : {options.band->first, options.band->second}) {
      if (!options.log_y || b > 0) {
        ymin = std::min(ymin, ty(b));
        ymax = std::max(ymax, ty(b));
      }
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (tx(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"440\" "
                    "font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"720\" height=\"440\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         escape_xml(options.title) + "</text>\n";
  if (options.band) {
    const double y1 = py(options.band->second), y2 = py(options.band->first);
    svg += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(y1) + "\" width=\"" + fixed(pw) +
           "\" height=\"" + fixed(std::max(0.5, y2 - y1)) + "\" fill=\"#cccccc\" opacity=\"0.6\"/>\n";
  }
  svg += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(pw) + "\" height=\"" +
         fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 4.0, fy = ymin + (ymax - ymin) * t / 4.0;
    const double vx = options.log_x ? std::pow(10.0, fx) : fx, vy = options.log_y ? std::pow(10.0, fy) : fy;
    svg += "<text x=\"" + fixed(left + pw * t / 4.0) + "\" y=\"" + fixed(top + ph + 16) +
           "\" text-anchor=\"middle\">" + tick_label(vx) + "</text>\n";
    svg += "<text x=\"" + fixed(left - 6) + "\" y=\"" + fixed(top + ph - ph * t / 4.0 + 4) +
           "\" text-anchor=\"end\">" + tick_label(vy) + "</text>\n";
  }
  svg += "<text x=\"" + fixed(left + pw / 2) + "\" y=\"" + fixed(H - 10) + "\" text-anchor=\"middle\">" +
         escape_xml(options.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fixed(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fixed(top + ph / 2) + ")\">" + escape_xml(options.y_label) + "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 8];
    std::string pts;
    for (std::size_t i = 0; i < series[s].values.size(); ++i) {
      const double x = static_cast<double>(series[s].iterations[i]), y = series[s].values[i];
      if (!usable(x, y)) continue;
      pts += fixed(px(x)) + "," + fixed(py(y)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
           pts + "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(s);
    svg += "<line x1=\"" + fixed(W - right + 10) + "\" y1=\"" + fixed(ly) + "\" x2=\"" + fixed(W - right + 34) +
           "\" y2=\"" + fixed(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fixed(W - right + 40) + "\" y=\"" + fixed(ly + 4) + "\">" +
           escape_xml(series[s].metric_id) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace lcmc::diagnostics
