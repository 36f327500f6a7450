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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lcmc/diagnostics.hpp"
#include "lcmc/error.hpp"
#include "lcmc/experiment.hpp"
#include "lcmc/samplers.hpp"
#include "lcmc/targets.hpp"
#include "lcmc/theory.hpp"
#include "lcmc/verify.hpp"

namespace py = pybind11;
using namespace lcmc;

namespace {

py::dict report_dict(const theory::BoundReport& r) {
  py::dict d;
  d["formula_id"] = r.formula_id;
  d["step_size"] = r.step_size;
  d["mixing_steps"] = r.mixing_steps;
  return d;
}

theory::TheoryParams params(int d, double m, double L, double delta, double beta, double c, double c_prime) {
  theory::TheoryParams p;
  p.d = d;
  p.m = m;
  p.L = L;
  p.delta = delta;
  p.beta = beta;
  p.c = c;
  p.c_prime = c_prime;
  return p;
}

InitialDistribution make_init(const py::object& init, double cov_scale) {
  if (init.is_none()) return InitialDistribution::gaussian_at_mode(cov_scale);
  return InitialDistribution::point_mass(init.cast<Vector>());
}

}  // namespace

PYBIND11_MODULE(_lcmc, m) {
  m.doc() = "Langevin and random-walk Metropolis samplers for log-concave targets";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ChainDivergence>(m, "ChainDivergence", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", base.ptr());

  py::enum_<SamplerId>(m, "Sampler")
      .value("ULA", SamplerId::ULA)
      .value("MALA", SamplerId::MALA)
      .value("MRW", SamplerId::MRW);

  py::class_<Target>(m, "Target")
      .def_property_readonly("name", &Target::name)
      .def_property_readonly("dim", &Target::dim)
      .def_property_readonly("m", &Target::m)
      .def_property_readonly("L", &Target::L)
      .def_property_readonly("kappa", &Target::kappa)
      .def_property_readonly("mode", [](const Target& t) -> py::object {
        if (!t.mode()) return py::none();
        return py::cast(*t.mode());
      })
      .def_property_readonly("warnings", &Target::warnings)
      .def("value", [](const Target& t, const Vector& x) { return t.value(x); }, py::arg("x"))
      .def("gradient", [](const Target& t, const Vector& x) { return t.gradient(x); }, py::arg("x"))
      .def("__repr__", [](const Target& t) {
        return "<Target " + t.name() + " dim=" + std::to_string(t.dim()) + ">";
      });

  m.def("gaussian_target", &gaussian_target, py::arg("sigma"));
  m.def("diagonal_gaussian_target", &diagonal_gaussian_target, py::arg("variances"));
  m.def("mixture_target", &mixture_target, py::arg("a"));
  m.def(
      "logistic_target",
      [](const Matrix& X, const Vector& Y, double alpha) { return logistic_posterior(LogisticData::make(X, Y, alpha)); },
      py::arg("X"), py::arg("Y"), py::arg("alpha") = 1.0);
  m.def(
      "synthetic_logistic_data",
      [](int n, int d, double alpha, const Vector& theta, double x_norm, std::uint64_t seed) {
        const auto data = LogisticData::synthetic(n, d, alpha, theta, x_norm, seed);
        return py::make_tuple(data.X, data.Y);
      },
      py::arg("n"), py::arg("d"), py::arg("alpha"), py::arg("theta_star"), py::arg("x_norm") = 1.0,
      py::arg("seed") = 0);
  m.def("exact_mixture_samples", &exact_mixture_samples, py::arg("a"), py::arg("seed"), py::arg("n"));

  m.def(
      "run_chain",
      [](SamplerId sampler, const Target& target, double h, std::size_t steps, std::uint64_t seed,
         const py::object& init, double cov_scale, bool lazy) {
        ChainOptions opt;
        opt.lazy = lazy;
        const InitialDistribution start = make_init(init, cov_scale);
        Trajectory t;
        {
          py::gil_scoped_release release;
          t = run_chain(sampler, target, start, h, steps, seed, opt);
        }
        py::dict out;
        out["states"] = t.states;
        out["accepted"] = t.accepted;
        out["h"] = t.h;
        out["seed"] = t.seed;
        return out;
      },
      py::arg("sampler"), py::arg("target"), py::arg("h"), py::arg("steps"), py::arg("seed") = 0,
      py::arg("init") = py::none(), py::arg("cov_scale") = 1.0, py::arg("lazy") = false,
      "Runs one chain. `init` is a start point; by default x0 ~ N(mode, cov_scale/L I).");

  auto th = m.def_submodule("theory", "Step sizes and mixing-time bounds");
  th.def("r", &theory::r, py::arg("s"), py::arg("d"));
  th.def("w", &theory::w, py::arg("s"), py::arg("m"), py::arg("L"), py::arg("d"));
  th.def("alpha_eps", &theory::alpha_eps, py::arg("epsilon"));
  th.def("h_tilde", &theory::h_tilde, py::arg("s"), py::arg("epsilon"), py::arg("m"), py::arg("L"), py::arg("d"));
  th.def("warmness_at_mode", &theory::warmness_at_mode, py::arg("kappa"), py::arg("d"));
  th.def(
      "mala_mixing_bound",
      [](int d, double m, double L, double delta, double beta, double c, double cp) {
        return report_dict(theory::mala_mixing_bound(params(d, m, L, delta, beta, c, cp)));
      },
      py::arg("d"), py::arg("m"), py::arg("L") = 1.0, py::arg("delta") = 0.1, py::arg("beta") = 1.0,
      py::arg("c") = 1.0, py::arg("c_prime") = 1.0);
  th.def(
      "mrw_mixing_bound",
      [](int d, double m, double L, double delta, double beta, double c, double cp) {
        return report_dict(theory::mrw_mixing_bound(params(d, m, L, delta, beta, c, cp)));
      },
      py::arg("d"), py::arg("m"), py::arg("L") = 1.0, py::arg("delta") = 0.1, py::arg("beta") = 1.0,
      py::arg("c") = 1.0, py::arg("c_prime") = 1.0);
  th.def("practical_step_size", &theory::practical_step_size, py::arg("sampler"), py::arg("d"),
         py::arg("kappa"), py::arg("L"), py::arg("delta") = 0.1);

  auto dg = m.def_submodule("diagnostics", "Empirical convergence diagnostics");
  dg.def("quantile", py::overload_cast<std::vector<double>, double>(&diagnostics::quantile), py::arg("values"),
         py::arg("q"));
  dg.def("effective_sample_size", [](const std::vector<double>& s, std::size_t lag) {
    return diagnostics::effective_sample_size(s, lag);
  }, py::arg("series"), py::arg("max_lag"));
  dg.def("acf", [](const std::vector<double>& s, std::size_t lag) { return diagnostics::acf(s, lag); },
         py::arg("series"), py::arg("max_lag"));
  dg.def(
      "discretized_tv",
      [](const Matrix& a, const Matrix& b, const std::vector<Vector>& dirs, int bins) {
        return diagnostics::discretized_tv(a, b, dirs, bins);
      },
      py::arg("samples_a"), py::arg("samples_b"), py::arg("directions"), py::arg("bins") = 100,
      "Samples are d x n matrices (one column per sample).");

  m.def(
      "verify_suite",
      [](std::uint64_t seed, unsigned threads) {
        std::vector<verify::CheckResult> res;
        {
          py::gil_scoped_release release;
          res = verify::run_suite(seed, threads);
        }
        py::list out;
        for (const auto& r : res) {
          py::dict d;
          d["name"] = r.name;
          d["observed"] = r.observed;
          d["bound"] = r.bound;
          d["passed"] = r.passed;
          d["n"] = r.n;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 2026, py::arg("threads") = 0);

  m.def("experiment_ids", &experiment_ids);
  m.def("preset_config", [](const std::string& id) { return format_spec(preset(id)); }, py::arg("experiment_id"));
  m.def(
      "run_experiment",
      [](const std::string& config, const std::string& out_dir, std::optional<std::uint64_t> seed, unsigned threads) {
        ExperimentSpec spec = parse_spec(config);
        if (seed) spec.master_seed = *seed;
        RunOptions opt;
        opt.out_dir = out_dir;
        opt.threads = threads;
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(spec, opt);
        }
        py::dict out;
        out["scalars"] = res.scalars;
        out["warnings"] = res.warnings;
        out["manifest"] = res.manifest;
        return out;
      },
      py::arg("config"), py::arg("out_dir") = "", py::arg("seed") = py::none(), py::arg("threads") = 0,
      "Runs an experiment from config text (see preset_config). Files go to out_dir/<experiment_id>.");
}
