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

// Acceptance runner: one PASS/FAIL line per criterion, tolerances fixed below.
// Criteria 5–8 run the experiment presets and write their artifacts under
// --out-dir; the others are fast property checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcmc/experiment.hpp"
#include "lcmc/io.hpp"
#include "lcmc/targets.hpp"
#include "lcmc/theory.hpp"
#include "lcmc/verify.hpp"
#include "oracles.hpp"

namespace {

using namespace lcmc;
namespace fs = std::filesystem;

// Criterion 1.
constexpr double kKernelResidual = 1e-3;
constexpr double kKernelStep = 0.1;
// Criterion 5.
constexpr double kGaussDimSlopeTol = 0.3;
const std::map<std::string, double> kGaussDimSlopes{{"MALA", 0.84}, {"ULA", 1.01}, {"MRW", 0.97}};
const std::map<std::string, double> kGaussErrSlopes{{"MALA", 0.33}, {"ULA", 2.23}, {"MRW", 0.33}};
const std::map<std::string, double> kGaussErrSlopeTol{{"MALA", 0.3}, {"ULA", 0.5}, {"MRW", 0.3}};
// Criterion 6.
constexpr double kWeaklySlopeTol = 0.5;
const std::map<std::string, double> kWeaklyDimSlopes{{"MALA", 1.61}, {"ULA", 2.78}, {"MRW", 2.73}};
const std::map<std::string, double> kWeaklyErrSlopes{{"MALA", 1.56}, {"ULA", 3.92}, {"MRW", 2.01}};
// Criterion 7.
constexpr double kMixtureEntryBudget = 1e4;
// Criterion 8.
constexpr double kAcceptanceFloor = 0.1;
// Criterion 9.
constexpr double kFormulaRelTol = 1e-9;
// Criterion 10: MRW/MALA over κ must stay within these multiples of κ where d ≥ κ r².
constexpr double kRatioLow = 2.0;
constexpr double kRatioHigh = 6.0;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v) { return format_number(v); }

ExperimentResult run_preset(const std::string& id, std::uint64_t seed, const fs::path& out, unsigned threads) {
  ExperimentSpec spec = preset(id);
  spec.master_seed = seed;
  RunOptions opt;
  opt.out_dir = out;
  opt.threads = threads;
  return run_experiment(spec, opt);
}

double scalar(const ExperimentResult& r, const std::string& key) {
  const auto it = r.scalars.find(key);
  if (it == r.scalars.end()) throw std::runtime_error("missing result scalar '" + key + "'");
  return it->second;
}

Outcome kernel_correctness() {
  Outcome o{true, ""};
  Vector a1(1);
  a1[0] = std::sqrt(0.5);
  const std::vector<Target> targets{diagonal_gaussian_target(Vector::Ones(1)), mixture_target(a1)};
  std::ostringstream os;
  for (const auto& t : targets) {
    const auto [lo, hi] = verify::kernel_grid_range(t);
    double mala_stat = 0.0;
    for (SamplerId s : {SamplerId::MALA, SamplerId::MRW}) {
      const auto rep = verify::kernel_residuals_1d(t, s, kKernelStep, lo, hi, 400);
      o.passed = o.passed && rep.stationarity_residual < kKernelResidual &&
                 rep.detailed_balance_residual < kKernelResidual;
      if (s == SamplerId::MALA) mala_stat = rep.stationarity_residual;
      os << t.name() << "/" << to_string(s) << " stat=" << num(rep.stationarity_residual)
         << " db=" << num(rep.detailed_balance_residual) << "; ";
    }
    const double ula = verify::kernel_residuals_1d(t, SamplerId::ULA, kKernelStep, lo, hi, 400).stationarity_residual;
    o.passed = o.passed && ula > mala_stat;
    os << t.name() << "/ULA stat=" << num(ula) << "; ";
  }
  o.detail = os.str();
  return o;
}

Outcome suite_group(const std::vector<verify::CheckResult>& suite, const std::string& prefix) {
  Outcome o{true, ""};
  int n = 0, failed = 0;
  double worst = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : suite) {
    if (r.name.rfind(prefix, 0) != 0) continue;
    ++n;
    if (!r.passed) {
      ++failed;
      o.detail += r.name + " observed=" + num(r.observed) + " bound=" + num(r.bound) + "; ";
    }
    if (prefix == "proposal_tv_bound:") worst = std::isnan(worst) ? r.observed : std::max(worst, r.observed);
    if (prefix != "proposal_tv_bound:") {
      const double margin = r.observed - r.bound;
      worst = std::isnan(worst) ? margin : std::min(worst, margin);
    }
  }
  o.passed = n > 0 && failed == 0;
  o.detail = std::to_string(n) + " checks, " + std::to_string(failed) + " failed" +
             (prefix == "proposal_tv_bound:" ? ", max TV/bound ratio " : ", min observed-bound margin ") +
             num(worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

bool slopes_within(const ExperimentResult& r, const std::map<std::string, double>& want,
                   const std::function<double(const std::string&)>& tol, std::ostringstream& os) {
  bool ok = true;
  for (const auto& [s, target] : want) {
    const double got = scalar(r, "slope:" + s);
    const bool in = std::abs(got - target) <= tol(s);
    ok = ok && in;
    os << s << " " << num(got) << " (want " << num(target) << "±" << num(tol(s)) << (in ? "" : ", out") << ") ";
  }
  return ok;
}

Outcome gaussian_scaling(std::uint64_t seed, const fs::path& out, unsigned threads) {
  const auto dim = run_preset("gaussian_dim", seed, out, threads);
  const auto err = run_preset("gaussian_err", seed, out, threads);
  std::ostringstream os;
  os << "dim: ";
  const bool a = slopes_within(dim, kGaussDimSlopes, [](const std::string&) { return kGaussDimSlopeTol; }, os);
  os << "| err: ";
  const bool b = slopes_within(err, kGaussErrSlopes, [](const std::string& s) { return kGaussErrSlopeTol.at(s); }, os);
  return {a && b, os.str()};
}

Outcome weakly_scaling(std::uint64_t seed, const fs::path& out, unsigned threads) {
  const auto dim = run_preset("weakly_dim", seed, out, threads);
  const auto err = run_preset("weakly_err", seed, out, threads);
  std::ostringstream os;
  os << "dim: ";
  const auto tol = [](const std::string&) { return kWeaklySlopeTol; };
  const bool a = slopes_within(dim, kWeaklyDimSlopes, tol, os);
  os << "| err: ";
  const bool b = slopes_within(err, kWeaklyErrSlopes, tol, os);
  if (a && b) return {true, "primary tolerance met; " + os.str()};
  // Fallback: slope(MALA) < slope(MRW) <= slope(ULA) in both sweeps.
  const auto ordered = [](const ExperimentResult& r) {
    return scalar(r, "slope:MALA") < scalar(r, "slope:MRW") && scalar(r, "slope:MRW") <= scalar(r, "slope:ULA");
  };
  const bool od = ordered(dim), oe = ordered(err);
  os << "| ordinal MALA<MRW<=ULA: dim " << (od ? "holds" : "fails") << ", err " << (oe ? "holds" : "fails");
  return {od && oe, "primary tolerance missed, ordinal fallback; " + os.str()};
}

Outcome mixture_band(std::uint64_t seed, const fs::path& out, unsigned threads) {
  const auto res = run_preset("mixture_tv", seed, out, threads);
  const ExperimentSpec spec = preset("mixture_tv");
  const double band_max = scalar(res, "band_max");
  const std::string def = "ULA(delta=" + num(spec.delta) + ")";
  const std::string big = "ULA(delta=" + num(*std::max_element(spec.ula_deltas.begin(), spec.ula_deltas.end())) + ")";
  const double entry = scalar(res, "entry:MALA");
  const double def_at = scalar(res, "tv_at_mala_entry:" + def);
  const double plateau = scalar(res, "plateau:" + big);
  const bool mala_in = std::isfinite(entry) && entry <= kMixtureEntryBudget;
  const bool def_out = def_at > band_max;
  const bool big_out = plateau > band_max;
  std::ostringstream os;
  os << "band [" << num(scalar(res, "band_min")) << ", " << num(band_max) << "]; MALA enters at k=" << num(entry)
     << "; " << def << " TV there " << num(def_at) << "; " << big << " plateau " << num(plateau);
  return {mala_in && def_out && big_out, os.str()};
}

Outcome acceptance_rates(std::uint64_t seed, const fs::path& out, unsigned threads) {
  const auto res = run_preset("stepsize_accept", seed, out, threads);
  const double mala_safe = scalar(res, "min_acceptance:MALA:gamma=0.5");
  const double mala_bold = scalar(res, "acceptance_at_max_d:MALA:gamma=0.2");
  const double mrw_safe = scalar(res, "min_acceptance:MRW:gamma=1");
  const double mrw_bold = scalar(res, "acceptance_at_max_d:MRW:gamma=0.4");
  const bool a = mala_safe >= kAcceptanceFloor, b = mala_bold < kAcceptanceFloor;
  const bool c = mrw_safe >= kAcceptanceFloor, e = mrw_bold < kAcceptanceFloor;
  std::ostringstream os;
  os << "MALA d^-0.5 min " << num(mala_safe) << (a ? "" : " (FAIL)") << "; MALA d^-0.2 at d=128 " << num(mala_bold)
     << (b ? "" : " (FAIL: stays above " + num(kAcceptanceFloor) + ")") << "; MRW d^-1 min " << num(mrw_safe)
     << (c ? "" : " (FAIL)") << "; MRW d^-0.4 at d=128 " << num(mrw_bold) << (e ? "" : " (FAIL)");
  return {a && b && c && e, os.str()};
}

Outcome theory_formulas() {
  using namespace theory;
  namespace orc = lcmc::oracle;
  int n = 0;
  double worst = 0.0;
  std::string bad;
  const auto cmp = [&](const std::string& what, double got, long double want) {
    const double e = static_cast<double>(orc::rel_err(got, want));
    ++n;
    worst = std::max(worst, e);
    if (!(e <= kFormulaRelTol)) bad += what + " ";
  };
  const double e1 = std::numbers::e;
  cmp("r(e^-4,4)", r(std::exp(-4.0), 4), 4.0L);
  cmp("r(0.5,4)", r(0.5, 4), orc::r(0.5L, 4));
  cmp("w(0.5,1,1,4)", w(0.5, 1.0, 1.0, 4), orc::w(0.5L, 1.0L, 1.0L, 4));
  cmp("alpha(0.5)", alpha_eps(0.5), orc::alpha_eps(0.5L));
  for (double s : {0.25, 0.5}) {
    for (double eps : {0.25, 0.5}) {
      for (int d : {2, 8}) cmp("h_tilde", h_tilde(s, eps, 0.25, 1.0, d), orc::h_tilde(s, eps, 0.25L, 1.0L, d));
    }
  }
  cmp("w_lc", w_lc(0.025, 1.0, 10, 1.0), orc::w_lc(0.025L, 1.0L, 10, 1.0L));
  TheoryParams p;
  p.d = 4;
  p.m = 0.25;
  p.beta = e1;
  p.delta = 0.1;
  cmp("mala_warm", mala_mixing_bound(p).mixing_steps, orc::mala_warm_steps(4, 0.25L, 1.0L, e1, 0.1L));
  cmp("mrw_warm", mrw_mixing_bound(p).mixing_steps, orc::mrw_warm_steps(4, 0.25L, 1.0L, e1, 0.1L));
  cmp("mrw_step", mrw_mixing_bound(p).step_size, orc::mrw_step(4, 0.25L, 1.0L, e1, 0.1L));
  cmp("beta_mode", warmness_at_mode(4.0, 4), 16.0L);
  cmp("beta_inexact", warmness_inexact(4.0, 2, 1.0, 1.0, 1.0), 8.0L * std::exp(1.0L));
  TheoryParams q;
  q.d = 10;
  q.nu = 1.0;
  q.delta = 0.1;
  const auto plan = weakly_logconcave_plan(q);
  cmp("lambda", plan.lambda, 0.02L);
  cmp("kappa_tilde", plan.kappa_tilde, 101.0L);
  cmp("practical_mala", practical_step_size(SamplerId::MALA, 4, 4.0, 1.0, 0.1), 0.25L);
  cmp("practical_ula", practical_step_size(SamplerId::ULA, 4, 1.0, 1.0, 0.1), 0.0025L);
  cmp("practical_mrw", practical_step_size(SamplerId::MRW, 4, 4.0, 1.0, 0.1), 1.0L / 16.0L);

  // Monotonicity grid: bounds grow with κ, d, β and 1/δ; h̃ ≤ 2/L.
  int grid = 0, violations = 0;
  for (auto bound : {&mala_mixing_bound, &mrw_mixing_bound}) {
    for (double k : {1.0, 4.0, 32.0}) {
      for (int d : {1, 4, 32}) {
        for (double b : {1.0, 100.0}) {
          for (double delta : {0.2, 0.05}) {
            TheoryParams base;
            base.d = d;
            base.m = 1.0 / k;
            base.beta = b;
            base.delta = delta;
            const double t0 = bound(base).mixing_steps;
            auto up = base;
            up.m /= 2.0;
            violations += bound(up).mixing_steps < t0;
            up = base;
            up.d *= 2;
            violations += bound(up).mixing_steps < t0;
            up = base;
            up.beta *= 2.0;
            violations += bound(up).mixing_steps < t0;
            up = base;
            up.delta /= 2.0;
            violations += bound(up).mixing_steps < t0;
            violations += h_tilde(0.25, 0.5, base.m, base.L, d) > 2.0 / base.L;
            grid += 5;
          }
        }
      }
    }
  }
  std::ostringstream os;
  os << n << " examples, max rel err " << num(worst) << " (tol " << num(kFormulaRelTol) << "); " << grid
     << " grid checks, " << violations << " violations";
  if (!bad.empty()) os << "; mismatched: " << bad;
  return {bad.empty() && violations == 0, os.str()};
}

Outcome mixing_ratio() {
  using namespace theory;
  int points = 0;
  bool ok = true;
  double lo = 1e300, hi = 0.0;
  for (int d : {64, 256, 1024}) {
    double prev = 0.0;
    for (double k : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
      TheoryParams p;
      p.d = d;
      p.m = 1.0 / k;
      p.beta = std::numbers::e;
      p.delta = 0.1;
      const double rr = r(p.delta / (2.0 * p.beta), d);
      if (k * rr * rr > d) continue;  // outside d ≳ κ, where MALA's d·κ term dominates
      const double ratio = mrw_mixing_bound(p).mixing_steps / mala_mixing_bound(p).mixing_steps;
      ok = ok && ratio > prev && ratio / k >= kRatioLow && ratio / k <= kRatioHigh;
      lo = std::min(lo, ratio / k);
      hi = std::max(hi, ratio / k);
      prev = ratio;
      ++points;
    }
  }
  std::ostringstream os;
  os << points << " grid points with d >= kappa r^2; ratio/kappa in [" << num(lo) << ", " << num(hi) << "] (want within ["
     << num(kRatioLow) << ", " << num(kRatioHigh) << "])";
  return {ok && points >= 10, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lcmc acceptance criteria"};
  std::string out_dir = "acceptance_out";
  std::uint64_t seed = 2026;
  unsigned threads = 0;
  std::vector<int> only;
  app.add_option("--out-dir", out_dir, "Directory for experiment artifacts");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const fs::path out(out_dir);
  fs::create_directories(out);
  const std::set<int> selected(only.begin(), only.end());

  std::vector<verify::CheckResult> suite;
  const auto need_suite = [&] {
    if (suite.empty()) suite = verify::run_suite(seed, threads);
  };

  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "kernel stationarity and detailed balance", kernel_correctness},
      {2, "proposal TV contraction", [&] { need_suite(); return suite_group(suite, "proposal_tv_bound:"); }},
      {3, "acceptance floor at h_tilde", [&] { need_suite(); return suite_group(suite, "acceptance_floor:"); }},
      {4, "high-probability ball", [&] { need_suite(); return suite_group(suite, "highprob_region:"); }},
      {5, "strongly log-concave scaling", [&] { return gaussian_scaling(seed, out, threads); }},
      {6, "weakly log-concave scaling", [&] { return weakly_scaling(seed, out, threads); }},
      {7, "mixture TV band", [&] { return mixture_band(seed, out, threads); }},
      {8, "acceptance rate vs step exponent", [&] { return acceptance_rates(seed, out, threads); }},
      {9, "theory formulas", theory_formulas},
      {10, "MRW/MALA bound ratio grows like kappa", mixing_ratio},
  };

  CsvWriter csv({"criterion", "name", "passed", "seconds", "detail"});
  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.passed;
    std::printf("criterion %2d: %s  %s [%.1fs] -- %s\n", c.id, o.passed ? "PASS" : "FAIL", c.name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    csv.cell(static_cast<long long>(c.id)).cell(c.name).cell(o.passed ? std::string_view("true") : "false");
    csv.cell(secs).cell(o.detail).end_row();
  }
  write_text_file(out / "acceptance.csv", csv.str());
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
