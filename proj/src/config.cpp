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

#include "pifs/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace pifs {

namespace {

std::size_t line_of(const YAML::Node& n) {
    const auto m = n.Mark();
    return m.is_null() ? 1 : static_cast<std::size_t>(m.line) + 1;
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& key, const std::string& msg) {
    throw ConfigError(line_of(n), key, msg);
}

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

void check_keys(const YAML::Node& n, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!n.IsMap()) fail(n, path, "expected a mapping");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        if (!ok.count(key)) fail(kv.first, join(path, key), "unknown key");
    }
}

YAML::Node require(const YAML::Node& parent, const std::string& path, const char* key) {
    const YAML::Node n = parent[key];
    if (!n) fail(parent, join(path, key), "missing required key");
    return n;
}

std::string scalar(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(n, path, "expected a scalar");
    return n.Scalar();
}

double number(const YAML::Node& n, const std::string& path) {
    const std::string s = scalar(n, path);
    Expr e;
    try {
        e = Expr::compile(s);
    } catch (const ExprError& err) {
        fail(n, path, std::string("bad number: ") + err.what());
    }
    if (e.uses_x() || e.uses_index() || e.max_param() > 0) fail(n, path, "expected a constant");
    const double v = e.eval(ExprEnv{});
    if (!std::isfinite(v)) fail(n, path, "value is not finite");
    return v;
}

double positive(const YAML::Node& n, const std::string& path) {
    const double v = number(n, path);
    if (!(v > 0.0)) fail(n, path, "must be positive");
    return v;
}

std::uint64_t integer(const YAML::Node& n, const std::string& path, std::uint64_t min = 0) {
    const std::string s = scalar(n, path);
    std::uint64_t v = 0;
    std::size_t used = 0;
    try {
        if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        // allow forms such as 1e6 when they are exact integers
        const double d = number(n, path);
        if (!(d >= 0.0) || d != std::floor(d) || d > 9.007199254740992e15) fail(n, path, "expected a nonnegative integer");
        v = static_cast<std::uint64_t>(d);
    }
    if (v < min) fail(n, path, "must be at least " + std::to_string(min));
    return v;
}

bool boolean(const YAML::Node& n, const std::string& path) {
    const std::string s = scalar(n, path);
    if (s == "true" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "no" || s == "off") return false;
    fail(n, path, "expected true or false");
}

std::vector<double> number_list(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence()) fail(n, path, "expected a list");
    std::vector<double> out;
    for (std::size_t k = 0; k < n.size(); ++k) out.push_back(number(n[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

std::vector<std::uint64_t> integer_list(const YAML::Node& n, const std::string& path, std::uint64_t min) {
    if (!n.IsSequence()) fail(n, path, "expected a list");
    std::vector<std::uint64_t> out;
    for (std::size_t k = 0; k < n.size(); ++k)
        out.push_back(integer(n[k], path + "[" + std::to_string(k) + "]", min));
    return out;
}

struct VarRules {
    bool x = false;
    bool i = false;
    std::size_t max_t = 0;
};

Expr expression(const YAML::Node& n, const std::string& path, const VarRules& rules) {
    const std::string s = scalar(n, path);
    Expr e;
    try {
        e = Expr::compile(s);
    } catch (const ExprError& err) {
        fail(n, path, std::string(err.what()) + " at column " + std::to_string(err.column()));
    }
    if (e.uses_x() && !rules.x) fail(n, path, "variable x not allowed here");
    if (e.uses_index() && !rules.i) fail(n, path, "variable i not allowed here");
    if (e.max_param() > rules.max_t)
        fail(n, path, "t" + std::to_string(e.max_param()) + " exceeds the parameter dimension " +
                          std::to_string(rules.max_t));
    return e;
}

MapDecl map_decl(const YAML::Node& n, const std::string& path, VarRules rules) {
    check_keys(n, path, {"rate", "log_rate", "sign", "offset", "eval", "deriv", "theta"});
    MapDecl m;
    m.line = line_of(n);
    const bool has_rate = bool(n["rate"]), has_log = bool(n["log_rate"]), has_eval = bool(n["eval"]);
    if (int(has_rate) + int(has_log) + int(has_eval) != 1)
        fail(n, path, "give exactly one of rate, log_rate or eval");
    if (has_eval) {
        m.form = MapDecl::Form::User;
        VarRules with_x = rules;
        with_x.x = true;
        m.eval = expression(n["eval"], join(path, "eval"), with_x);
        m.deriv = expression(require(n, path, "deriv"), join(path, "deriv"), with_x);
        if (n["theta"]) {
            m.theta = number(n["theta"], join(path, "theta"));
            if (!(m.theta > 0.0 && m.theta <= 1.0)) fail(n["theta"], join(path, "theta"), "must lie in (0, 1]");
        }
        for (const char* k : {"offset", "sign"})
            if (n[k]) fail(n[k], join(path, k), "not used by eval maps");
        return m;
    }
    if (n["deriv"] || n["theta"]) fail(n, path, "deriv and theta apply to eval maps only");
    m.offset = n["offset"] ? expression(n["offset"], join(path, "offset"), rules) : Expr::constant(0.0);
    if (has_rate) {
        m.form = MapDecl::Form::Affine;
        m.rate = expression(n["rate"], join(path, "rate"), rules);
        if (n["sign"]) fail(n["sign"], join(path, "sign"), "sign applies to log_rate maps only");
    } else {
        m.form = MapDecl::Form::LogAffine;
        m.log_rate = expression(n["log_rate"], join(path, "log_rate"), rules);
        m.sign = n["sign"] ? expression(n["sign"], join(path, "sign"), rules) : Expr::constant(1.0);
    }
    return m;
}

void parse_measure(const YAML::Node& n, ExperimentConfig& cfg) {
    const std::string path = "measure";
    check_keys(n, path, {"uniform", "geometric", "dirac", "head", "tail"});
    const int shorthand = int(bool(n["uniform"])) + int(bool(n["geometric"])) + int(bool(n["dirac"]));
    if (shorthand > 1 || (shorthand == 1 && (n["head"] || n["tail"])))
        fail(n, path, "give one of uniform, geometric, dirac or head/tail");
    try {
        if (n["uniform"]) {
            const auto m = integer(n["uniform"], "measure.uniform", 1);
            cfg.head.assign(m, 1.0 / static_cast<double>(m));
            cfg.measure_id = "uniform(" + std::to_string(m) + ")";
        } else if (n["geometric"]) {
            const double q = number(n["geometric"], "measure.geometric");
            if (!(q > 0.0 && q < 1.0)) fail(n["geometric"], "measure.geometric", "ratio must lie in (0, 1)");
            cfg.tail = GeometricTail{q, 1.0};
            cfg.measure_id = "geometric(" + format_number(q) + ")";
        } else if (n["dirac"]) {
            const auto s = integer(n["dirac"], "measure.dirac", 1);
            cfg.head.assign(s, 0.0);
            cfg.head.back() = 1.0;
            cfg.measure_id = "dirac(" + std::to_string(s) + ")";
        } else {
            if (!n["head"] && !n["tail"]) fail(n, path, "empty measure declaration");
            if (n["head"]) cfg.head = number_list(n["head"], "measure.head");
            const double rest = 1.0 - std::accumulate(cfg.head.begin(), cfg.head.end(), 0.0);
            if (const auto t = n["tail"]) {
                check_keys(t, "measure.tail", {"kind", "ratio", "exponent", "log_exponent", "shift", "mass"});
                const auto kind = scalar(require(t, "measure.tail", "kind"), "measure.tail.kind");
                const double mass = t["mass"] ? number(t["mass"], "measure.tail.mass") : rest;
                if (kind == "geometric") {
                    cfg.tail = GeometricTail{number(require(t, "measure.tail", "ratio"), "measure.tail.ratio"), mass};
                } else if (kind == "power_law") {
                    cfg.tail = PowerLawTail{number(require(t, "measure.tail", "exponent"), "measure.tail.exponent"),
                                            mass};
                } else if (kind == "log_power") {
                    LogPowerTail lp;
                    if (t["log_exponent"]) lp.log_exponent = number(t["log_exponent"], "measure.tail.log_exponent");
                    if (t["shift"]) lp.shift = number(t["shift"], "measure.tail.shift");
                    lp.mass = mass;
                    cfg.tail = lp;
                } else {
                    fail(t["kind"], "measure.tail.kind", "unknown tail kind '" + kind + "'");
                }
            }
            std::ostringstream id;
            id << "head[";
            for (std::size_t k = 0; k < cfg.head.size(); ++k) id << (k ? ";" : "") << format_number(cfg.head[k]);
            id << "]";
            if (!std::holds_alternative<std::monostate>(cfg.tail)) id << "+" << describe(cfg.tail);
            cfg.measure_id = id.str();
        }
        (void)BernoulliSpec(cfg.head, cfg.tail);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(n, path, e.what());
    }
}

void parse_budgets(const YAML::Node& n, LyapunovBudgets& b) {
    check_keys(n, "budgets", {"method", "samples", "per_symbol", "orbit_length", "burn_in", "tol", "divergence_cap",
                              "tail_tol", "max_terms"});
    if (n["method"]) {
        try {
            b.method = parse_lyapunov_method(scalar(n["method"], "budgets.method"));
        } catch (const std::exception& e) {
            fail(n["method"], "budgets.method", e.what());
        }
    }
    if (n["samples"]) b.samples = integer(n["samples"], "budgets.samples", 1);
    if (n["per_symbol"]) b.per_symbol = integer(n["per_symbol"], "budgets.per_symbol", 1);
    if (n["orbit_length"]) b.orbit_length = integer(n["orbit_length"], "budgets.orbit_length", 1);
    if (n["burn_in"]) b.burn_in = integer(n["burn_in"], "budgets.burn_in");
    if (n["tol"]) b.tol = positive(n["tol"], "budgets.tol");
    if (n["divergence_cap"]) b.divergence_cap = positive(n["divergence_cap"], "budgets.divergence_cap");
    if (n["tail_tol"]) b.tail_tol = positive(n["tail_tol"], "budgets.tail_tol");
    if (n["max_terms"]) b.max_terms = integer(n["max_terms"], "budgets.max_terms", 1);
}

std::vector<double> decreasing(const YAML::Node& n, const std::string& path) {
    auto v = number_list(n, path);
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!(v[k] > 0.0)) fail(n, path, "entries must be positive");
        if (k > 0 && !(v[k] < v[k - 1])) fail(n, path, "entries must be strictly decreasing");
    }
    return v;
}

} // namespace

ConfigError::ConfigError(std::size_t line, const std::string& key, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + (key.empty() ? "" : key + ": ") + message),
      line_(line), key_(key), message_(message) {}

std::string to_string(RunKind k) {
    switch (k) {
        case RunKind::Validate: return "validate";
        case RunKind::Dimension: return "dimension";
        case RunKind::Sweep: return "sweep";
        case RunKind::Attractor: return "attractor";
        case RunKind::Transversality: return "transversality";
        case RunKind::Report: return "report";
    }
    return "";
}

std::optional<RunKind> parse_run_kind(const std::string& name) {
    for (auto k : {RunKind::Validate, RunKind::Dimension, RunKind::Sweep, RunKind::Attractor, RunKind::Transversality,
                   RunKind::Report})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int k = 15; k >= 0; --k, v >>= 4) s[static_cast<std::size_t>(k)] = digits[v & 0xf];
    return s;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(static_cast<std::size_t>(e.mark.line) + 1, "", e.msg);
    }
    if (!root || root.IsNull()) throw ConfigError(1, "", "empty config");
    check_keys(root, "", {"experiment", "domain", "system", "parameters", "measure", "dimension", "budgets",
                          "attractor", "exceptional", "transversality", "validation", "output"});

    ExperimentConfig cfg;
    cfg.origin = origin;
    cfg.config_hash = fnv1a64(text);

    const auto ex = require(root, "", "experiment");
    check_keys(ex, "experiment", {"name", "kind", "seed"});
    cfg.name = scalar(require(ex, "experiment", "name"), "experiment.name");
    if (cfg.name.empty() || cfg.name.find_first_of("/\\ ") != std::string::npos)
        fail(ex["name"], "experiment.name", "must be a nonempty word without slashes or spaces");
    const auto kind_node = require(ex, "experiment", "kind");
    const auto kind = parse_run_kind(scalar(kind_node, "experiment.kind"));
    if (!kind) fail(kind_node, "experiment.kind", "unknown run kind '" + kind_node.Scalar() + "'");
    cfg.kind = *kind;
    if (ex["seed"]) cfg.seed = integer(ex["seed"], "experiment.seed");

    const auto dom = require(root, "", "domain");
    const auto ab = number_list(dom, "domain");
    if (ab.size() != 2 || !(ab[0] < ab[1])) fail(dom, "domain", "expected [a, b] with a < b");
    cfg.domain_a = ab[0];
    cfg.domain_b = ab[1];

    if (const auto par = root["parameters"]) {
        check_keys(par, "parameters", {"box", "t", "grid", "max_points"});
        if (const auto box = par["box"]) {
            if (!box.IsSequence() || box.size() == 0) fail(box, "parameters.box", "expected a list of [lo, hi]");
            if (box.size() > kMaxParamDim)
                fail(box, "parameters.box", "at most " + std::to_string(kMaxParamDim) + " axes");
            for (std::size_t k = 0; k < box.size(); ++k) {
                const auto lh = number_list(box[k], "parameters.box");
                if (lh.size() != 2 || !(lh[0] < lh[1])) fail(box[k], "parameters.box", "expected [lo, hi] with lo < hi");
                cfg.box.axes.emplace_back(lh[0], lh[1]);
            }
        }
        if (par["t"]) {
            cfg.t = number_list(par["t"], "parameters.t");
            if (cfg.t.size() != cfg.box.dim()) fail(par["t"], "parameters.t", "length must match parameters.box");
            if (!cfg.box.contains(cfg.t)) fail(par["t"], "parameters.t", "point outside parameters.box");
        }
        if (par["grid"]) {
            const auto g = integer_list(par["grid"], "parameters.grid", 1);
            cfg.grid.assign(g.begin(), g.end());
            if (cfg.grid.size() != cfg.box.dim()) fail(par["grid"], "parameters.grid", "length must match parameters.box");
        }
        if (par["max_points"]) cfg.max_points = integer(par["max_points"], "parameters.max_points", 1);
    }

    const auto sys = require(root, "", "system");
    check_keys(sys, "system", {"parabolic", "maps", "generator", "max_index", "uniform_u"});
    const VarRules family_rules{false, true, cfg.box.dim()};
    if (const auto p = sys["parabolic"]) {
        if (p.IsScalar()) {
            cfg.parabolic = p.Scalar();
            if (cfg.parabolic != "none" && cfg.parabolic != "moebius")
                fail(p, "system.parabolic", "expected none, moebius or an eval/deriv mapping");
        } else {
            cfg.parabolic = "user";
            cfg.parabolic_map = map_decl(p, "system.parabolic", VarRules{false, false, 0});
            if (cfg.parabolic_map->form != MapDecl::Form::User)
                fail(p, "system.parabolic", "a user parabolic map needs eval and deriv");
        }
    }
    if (const auto maps = sys["maps"]) {
        if (!maps.IsSequence()) fail(maps, "system.maps", "expected a list");
        for (std::size_t k = 0; k < maps.size(); ++k)
            cfg.maps.push_back(map_decl(maps[k], "system.maps[" + std::to_string(k) + "]", family_rules));
    }
    if (sys["generator"]) cfg.generator = map_decl(sys["generator"], "system.generator", family_rules);
    const Symbol first = cfg.parabolic == "none" ? 1 : 2;
    if (sys["max_index"]) {
        cfg.max_index = integer(sys["max_index"], "system.max_index", 1);
        if (!cfg.generator && *cfg.max_index != cfg.maps.size() + first - 1)
            fail(sys["max_index"], "system.max_index", "must equal the number of declared maps without a generator");
    } else if (!cfg.generator) {
        cfg.max_index = cfg.maps.size() + first - 1;
    }
    if (cfg.maps.empty() && !cfg.generator && cfg.parabolic == "none")
        fail(sys, "system", "declare maps, a generator or both");
    if (cfg.max_index && *cfg.max_index < 1) fail(sys, "system", "system has no maps");
    if (sys["uniform_u"]) {
        const double u = number(sys["uniform_u"], "system.uniform_u");
        if (!(u > 0.0 && u < 1.0)) fail(sys["uniform_u"], "system.uniform_u", "must lie in (0, 1)");
        cfg.uniform_u = u;
    }

    // Parameter-free systems run as constant families over a unit box.
    cfg.parametrized = cfg.box.dim() > 0;
    if (!cfg.parametrized) cfg.box.axes.emplace_back(0.0, 1.0);
    if (cfg.t.empty())
        for (const auto& [lo, hi] : cfg.box.axes) cfg.t.push_back(0.5 * (lo + hi));

    parse_measure(require(root, "", "measure"), cfg);

    if (const auto dim = root["dimension"]) {
        check_keys(dim, "dimension", {"n_list", "convergence_tol"});
        if (dim["n_list"]) {
            const auto ns = integer_list(dim["n_list"], "dimension.n_list", 1);
            for (std::size_t k = 1; k < ns.size(); ++k)
                if (!(ns[k] > ns[k - 1])) fail(dim["n_list"], "dimension.n_list", "levels must be increasing");
            cfg.n_list.assign(ns.begin(), ns.end());
        }
        if (dim["convergence_tol"]) cfg.convergence_tol = positive(dim["convergence_tol"], "dimension.convergence_tol");
    }
    if (const auto b = root["budgets"]) parse_budgets(b, cfg.budgets);

    if (const auto a = root["attractor"]) {
        check_keys(a, "attractor", {"points", "tol", "bins", "depth_cap", "scales", "radii", "max_centers", "write_cloud"});
        auto& at = cfg.attractor;
        if (a["points"]) at.points = integer(a["points"], "attractor.points", 1);
        if (a["tol"]) at.tol = positive(a["tol"], "attractor.tol");
        if (a["bins"]) at.bins = integer(a["bins"], "attractor.bins", 2);
        if (a["depth_cap"]) at.depth_cap = integer(a["depth_cap"], "attractor.depth_cap", 1);
        if (a["scales"]) at.scales = decreasing(a["scales"], "attractor.scales");
        if (a["radii"]) at.radii = decreasing(a["radii"], "attractor.radii");
        if (a["max_centers"]) at.max_centers = integer(a["max_centers"], "attractor.max_centers", 1);
        if (a["write_cloud"]) at.write_cloud = boolean(a["write_cloud"], "attractor.write_cloud");
        if (!at.scales.empty() && at.scales.size() < 4) fail(a["scales"], "attractor.scales", "need at least 4 scales");
        if (!at.radii.empty() && at.radii.size() < 4) fail(a["radii"], "attractor.radii", "need at least 4 radii");
    }

    if (const auto e = root["exceptional"]) {
        check_keys(e, "exceptional", {"alpha"});
        const double a = number(require(e, "exceptional", "alpha"), "exceptional.alpha");
        if (!(a > 0.0 && a < 1.0)) fail(e["alpha"], "exceptional.alpha", "must lie in (0, 1)");
        cfg.alpha = a;
    }

    if (const auto tr = root["transversality"]) {
        check_keys(tr, "transversality", {"pairs", "r_list", "grid", "tol", "adversarial_symbols"});
        auto& tc = cfg.transversality;
        tc.present = true;
        if (tr["pairs"]) tc.pairs = integer(tr["pairs"], "transversality.pairs");
        tc.r_list = number_list(require(tr, "transversality", "r_list"), "transversality.r_list");
        const auto g = integer_list(require(tr, "transversality", "grid"), "transversality.grid", 1);
        tc.grid.assign(g.begin(), g.end());
        if (tr["tol"]) tc.tol = positive(tr["tol"], "transversality.tol");
        if (tr["adversarial_symbols"])
            tc.adversarial_symbols = integer(tr["adversarial_symbols"], "transversality.adversarial_symbols");
        if (tc.grid.size() != cfg.box.dim()) fail(tr["grid"], "transversality.grid", "length must match parameters.box");
        if (tc.r_list.empty()) fail(tr["r_list"], "transversality.r_list", "empty list");
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (double r : tc.r_list) {
            if (!(r > 0.0)) fail(tr["r_list"], "transversality.r_list", "radii must be positive");
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (hi < 8.0 * lo) fail(tr["r_list"], "transversality.r_list", "must span at least 3 dyadic decades");
        for (std::size_t k = 0; k < tc.grid.size(); ++k) {
            const double h = (cfg.box.axes[k].second - cfg.box.axes[k].first) / static_cast<double>(tc.grid[k]);
            if (h > lo / 10.0) fail(tr["grid"], "transversality.grid", "resolution must be at most min(r_list) / 10");
        }
    }

    if (const auto v = root["validation"]) {
        check_keys(v, "validation", {"grid_pts", "max_indices"});
        if (v["grid_pts"]) cfg.validation_grid = integer(v["grid_pts"], "validation.grid_pts", 16);
        if (v["max_indices"]) cfg.validation_indices = integer(v["max_indices"], "validation.max_indices", 1);
    }
    if (const auto o = root["output"]) {
        check_keys(o, "output", {"dir"});
        if (o["dir"]) cfg.output_dir = scalar(o["dir"], "output.dir");
    }

    // Build once so that domain errors in the declarations surface as schema errors.
    try {
        (void)build_family(cfg).at(cfg.t);
    } catch (const std::exception& e) {
        fail(sys, "system", e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, "", "cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void check_run_requirements(const ExperimentConfig& cfg, RunKind kind) {
    const bool needs_profile = kind == RunKind::Dimension || kind == RunKind::Sweep || kind == RunKind::Report;
    if (needs_profile && cfg.n_list.size() < 3)
        throw ConfigError(1, "dimension.n_list", "run kind " + to_string(kind) + " needs at least 3 levels");
    if (kind == RunKind::Sweep) {
        if (!cfg.parametrized) throw ConfigError(1, "parameters.box", "a sweep needs a parameter box");
        if (cfg.grid.empty()) throw ConfigError(1, "parameters.grid", "a sweep needs a parameter grid");
        std::size_t total = 1;
        for (auto c : cfg.grid) total *= c;
        if (total > cfg.max_points)
            throw ConfigError(1, "parameters.grid",
                              "grid cap exceeded: " + std::to_string(total) + " points > max_points " +
                                  std::to_string(cfg.max_points));
    }
    if (kind == RunKind::Transversality) {
        if (!cfg.transversality.present)
            throw ConfigError(1, "transversality", "run kind transversality needs a transversality section");
        if (!cfg.parametrized) throw ConfigError(1, "parameters.box", "transversality needs a parameter box");
    }
}

namespace {

MapSpec make_map(const MapDecl& m, std::span<const double> t, Symbol i, const std::string& label) {
    ExprEnv env;
    env.i = static_cast<double>(i);
    for (std::size_t k = 0; k < t.size() && k < kMaxParamDim; ++k) env.t[k] = t[k];
    switch (m.form) {
        case MapDecl::Form::Affine: return MapSpec::affine(m.rate.eval(env), m.offset.eval(env));
        case MapDecl::Form::LogAffine:
            return MapSpec::affine_log(m.log_rate.eval(env), m.sign.eval(env), m.offset.eval(env));
        case MapDecl::Form::User: {
            MapSpec::UserFunctions f;
            f.eval = [e = m.eval, env](double x) mutable {
                env.x = x;
                return e.eval(env);
            };
            f.deriv = [e = m.deriv, env](double x) mutable {
                env.x = x;
                return e.eval(env);
            };
            f.theta = m.theta;
            f.label = label;
            return MapSpec::user(std::move(f));
        }
    }
    throw std::logic_error("unreachable map form");
}

} // namespace

FamilySpec build_family(const ExperimentConfig& cfg) {
    const IntervalDomain X(cfg.domain_a, cfg.domain_b);
    std::optional<MapSpec> parabolic;
    if (cfg.parabolic == "moebius") parabolic = MapSpec::moebius(X);
    if (cfg.parabolic == "user") parabolic = make_map(*cfg.parabolic_map, {}, 1, cfg.parabolic_map->eval.source());
    const Symbol first = parabolic ? 2 : 1;
    auto maps = cfg.maps;
    auto gen = cfg.generator;
    FamilySpec::Generator g = [maps, gen, first](std::span<const double> t, Symbol i) {
        const Symbol k = i - first;
        if (k < maps.size()) return make_map(maps[k], t, i, maps[k].eval.source());
        if (!gen) throw std::domain_error("symbol " + std::to_string(i) + " is not declared");
        return make_map(*gen, t, i, gen->eval.source());
    };
    FamilySpec F(X, cfg.box, parabolic, std::move(g), cfg.max_index, cfg.name);
    F.declared_uniform_u = cfg.uniform_u;
    return F;
}

BernoulliSpec build_measure(const ExperimentConfig& cfg) { return BernoulliSpec(cfg.head, cfg.tail); }

} // namespace pifs
