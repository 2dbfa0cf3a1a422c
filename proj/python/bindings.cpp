/*
   Copyright 2026 The pifs-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <limits>

#include "pifs/config.hpp"
#include "pifs/dimension.hpp"
#include "pifs/empirical_dim.hpp"
#include "pifs/experiment.hpp"
#include "pifs/exponents.hpp"
#include "pifs/projection.hpp"
#include "pifs/symbolic_measures.hpp"
#include "pifs/transversality.hpp"

namespace py = pybind11;
using namespace pifs;

namespace {

double ext_to_float(const ExtReal& v) {
    return v.is_finite() ? v.value() : std::numeric_limits<double>::infinity();
}

ExtReal float_to_ext(double v) { return std::isinf(v) && v > 0 ? ExtReal::infinity() : ExtReal(v); }

py::dict estimate_dict(const LyapunovEstimate& e) {
    py::dict d;
    d["mean"] = e.mean;
    d["std_error"] = e.std_error;
    d["bias_bound"] = e.bias_bound;
    d["n_samples"] = e.n_samples;
    d["method"] = to_string(e.method);
    d["diverged"] = e.diverged;
    d["verdict_path"] = e.verdict_path;
    return d;
}

PointCloud cloud_from(const std::vector<double>& xs, const std::vector<double>& errs) {
    PointCloud c;
    const double w = xs.empty() ? 0.0 : 1.0 / static_cast<double>(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) c.points.push_back({xs[k], w, errs.empty() ? 0.0 : errs.at(k)});
    return c;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Core bindings of pifs-lab";
    m.attr("__version__") = kVersion;

    py::class_<BernoulliSpec>(m, "BernoulliSpec")
        .def(py::init([](std::vector<double> head) { return BernoulliSpec(std::move(head)); }), py::arg("head"))
        .def_static("uniform", &BernoulliSpec::uniform, py::arg("m"))
        .def_static("geometric", &BernoulliSpec::geometric, py::arg("ratio"))
        .def_static("dirac", &BernoulliSpec::dirac, py::arg("symbol"))
        .def_static(
            "with_geometric_tail",
            [](std::vector<double> head, double ratio, double mass) {
                return BernoulliSpec(std::move(head), GeometricTail{ratio, mass});
            },
            py::arg("head"), py::arg("ratio"), py::arg("mass"))
        .def_static(
            "with_power_law_tail",
            [](std::vector<double> head, double exponent, double mass) {
                return BernoulliSpec(std::move(head), PowerLawTail{exponent, mass});
            },
            py::arg("head"), py::arg("exponent"), py::arg("mass"))
        .def_static(
            "with_log_power_tail",
            [](std::vector<double> head, double log_exponent, double shift, double mass) {
                return BernoulliSpec(std::move(head), LogPowerTail{log_exponent, shift, mass});
            },
            py::arg("head"), py::arg("log_exponent") = 2.0, py::arg("shift") = 2.0, py::arg("mass") = 1.0)
        .def("prob", &BernoulliSpec::prob, py::arg("i"))
        .def("mass_from", &BernoulliSpec::mass_from, py::arg("i"))
        .def("entropy", [](const BernoulliSpec& mu) { return ext_to_float(mu.entropy()); })
        .def("support_max", &BernoulliSpec::support_max)
        .def("sample", &BernoulliSpec::sample, py::arg("u"))
        .def("concentrated_entropy_at_log_level", &BernoulliSpec::concentrated_entropy_at_log_level,
             py::arg("log_level"));

    py::class_<ConcentratedBernoulli>(m, "ConcentratedBernoulli")
        .def_property_readonly("level", &ConcentratedBernoulli::level)
        .def_property_readonly("probs", &ConcentratedBernoulli::probs)
        .def("entropy", [](const ConcentratedBernoulli& c) { return ext_to_float(entropy(c)); });

    m.def(
        "concentrate", [](const BernoulliSpec& mu, std::size_t n) { return concentrate(mu, n); }, py::arg("mu"),
        py::arg("n"));

    py::class_<SystemSpec>(m, "SystemSpec")
        .def_property_readonly("max_index", &SystemSpec::max_index)
        .def_property_readonly("id", &SystemSpec::id)
        .def("eval", [](const SystemSpec& S, Symbol i, double x) { return S.map(i).eval(x); })
        .def("deriv", [](const SystemSpec& S, Symbol i, double x) { return S.map(i).deriv(x); });

    m.def(
        "affine_system",
        [](const std::vector<double>& rates, const std::vector<double>& offsets, std::pair<double, double> domain,
           bool moebius_parabolic, const std::string& id) {
            if (rates.size() != offsets.size()) throw py::value_error("rates and offsets differ in length");
            const IntervalDomain X(domain.first, domain.second);
            std::vector<MapSpec> maps;
            for (std::size_t k = 0; k < rates.size(); ++k) maps.push_back(MapSpec::affine(rates[k], offsets[k]));
            std::optional<MapSpec> par;
            if (moebius_parabolic) par = MapSpec::moebius(X);
            return SystemSpec::finite(X, par, std::move(maps), id);
        },
        py::arg("rates"), py::arg("offsets"), py::arg("domain") = std::make_pair(0.0, 1.0),
        py::arg("moebius_parabolic") = false, py::arg("id") = "system");

    m.def(
        "project",
        [](const SystemSpec& S, std::vector<Symbol> prefix, std::vector<Symbol> cycle, double tol) {
            const auto p = cycle.empty() ? project(S, Word(std::move(prefix)), tol)
                                         : project(S, CodedWord{Word(std::move(prefix)), Word(std::move(cycle))}, tol);
            return py::make_tuple(p.x, p.err, p.depth, p.truncated);
        },
        py::arg("system"), py::arg("prefix"), py::arg("cycle") = std::vector<Symbol>{}, py::arg("tol") = 1e-12,
        "Returns (x, err, depth, truncated) for the word prefix + cycle^inf.");

    m.def(
        "lyapunov",
        [](const SystemSpec& S, const BernoulliSpec& mu, const std::string& method, std::size_t samples,
           std::uint64_t seed, unsigned jobs) {
            LyapunovBudgets b;
            b.method = parse_lyapunov_method(method);
            b.samples = b.per_symbol = b.orbit_length = samples;
            b.jobs = jobs;
            return estimate_dict(lyapunov(S, mu, b, seed));
        },
        py::arg("system"), py::arg("mu"), py::arg("method") = "series", py::arg("samples") = 100000,
        py::arg("seed") = 0, py::arg("jobs") = 1);

    m.def(
        "dimension_formula", [](double h, double lam) { return dimension_formula(float_to_ext(h), float_to_ext(lam)); },
        py::arg("h"), py::arg("lam"));
    m.def("exceptional_bound", &exceptional_bound, py::arg("sup_ratio"), py::arg("alpha"), py::arg("d"));

    m.def(
        "sample_attractor",
        [](const SystemSpec& S, const BernoulliSpec& mu, std::size_t n, double tol, std::uint64_t seed, unsigned jobs) {
            const auto c = sample_attractor(S, mu, n, tol, seed, jobs);
            std::vector<double> xs, errs;
            for (const auto& p : c.points) {
                xs.push_back(p.x);
                errs.push_back(p.err);
            }
            return py::make_tuple(xs, errs);
        },
        py::arg("system"), py::arg("mu"), py::arg("n"), py::arg("tol") = 1e-9, py::arg("seed") = 0,
        py::arg("jobs") = 1, "Returns (x values, certified errors).");

    m.def(
        "box_count_dimension",
        [](const std::vector<double>& xs, std::pair<double, double> domain, const std::vector<double>& scales) {
            const auto c = cloud_from(xs, {});
            ScalePairs pairs;
            for (const auto& [r, n] : box_count(c, IntervalDomain(domain.first, domain.second), scales))
                pairs.emplace_back(r, static_cast<double>(n));
            const auto f = fit_dimension(pairs);
            return py::make_tuple(f.slope, f.r_squared, f.pairs);
        },
        py::arg("xs"), py::arg("domain"), py::arg("scales"), "Returns (slope, r_squared, [(r, count)]).");

    m.def(
        "local_dimension",
        [](const std::vector<double>& xs, const std::vector<double>& radii) {
            const auto f = local_dim_measure(cloud_from(xs, {}), radii);
            return py::make_tuple(f.slope, f.r_squared, f.warnings);
        },
        py::arg("xs"), py::arg("radii"));

    m.def(
        "run_config",
        [](const std::string& path, std::optional<std::string> kind, unsigned jobs, std::optional<std::uint64_t> seed,
           std::optional<std::string> out) {
            RunOptions opt;
            if (kind) {
                opt.kind = parse_run_kind(*kind);
                if (!opt.kind) throw py::value_error("unknown run kind " + *kind);
            }
            opt.jobs = jobs;
            opt.seed = seed;
            opt.out_dir = out;
            py::dict d;
            try {
                const auto cfg = load_config(path);
                const auto res = run_experiment(cfg, opt);
                d["exit_code"] = res.exit_code;
                d["stage"] = res.stage;
                d["message"] = res.message;
                d["summary"] = res.summary;
                d["out_dir"] = res.out_dir;
                d["artifacts"] = res.artifacts;
            } catch (const ConfigError& e) {
                d["exit_code"] = 2;
                d["stage"] = "config";
                d["message"] = std::string(e.what());
                d["line"] = e.line();
            }
            return d;
        },
        py::arg("path"), py::arg("kind") = py::none(), py::arg("jobs") = 1, py::arg("seed") = py::none(),
        py::arg("out") = py::none(),
        "Runs a config file; returns a dict with exit_code 0, 1 or 2 and the artifacts written.");
}
