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

#include "pifs/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pifs/dimension.hpp"
#include "pifs/empirical_dim.hpp"
#include "pifs/parallel.hpp"
#include "pifs/transversality.hpp"

namespace pifs {

namespace {

constexpr std::size_t kPgmHeight = 64;
constexpr double kDivergenceThreshold = 10.0;

class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what) : std::runtime_error(what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

template <class Fn>
auto in_stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

std::string fixed6(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string join_t(std::span<const double> t) {
    std::string s;
    for (std::size_t k = 0; k < t.size(); ++k) s += (k ? ";" : "") + format_number(t[k]);
    return s;
}

std::string number_or_inf(const ExtReal& v) { return v.is_finite() ? format_number(v.value()) : "inf"; }

struct Context {
    const ExperimentConfig& cfg;
    RunKind kind;
    std::uint64_t seed;
    unsigned jobs;
    FamilySpec F;
    BernoulliSpec mu;
    LyapunovBudgets budgets;
    std::string header;
    RunResult& res;
    std::ostringstream summary;
};

std::string budgets_string(const LyapunovBudgets& b) {
    std::ostringstream os;
    os << "method:" << to_string(b.method) << ",samples:" << b.samples << ",per_symbol:" << b.per_symbol
       << ",orbit_length:" << b.orbit_length << ",burn_in:" << b.burn_in << ",tol:" << format_number(b.tol)
       << ",divergence_cap:" << format_number(b.divergence_cap) << ",tail_tol:" << format_number(b.tail_tol)
       << ",max_terms:" << b.max_terms;
    return os.str();
}

// ---- validation --------------------------------------------------------

bool stage_validate(Context& c) {
    const auto rep = in_stage("validate", [&] {
        return validate_system(c.F.at(c.cfg.t), c.cfg.validation_grid, c.cfg.validation_indices);
    });
    std::ostringstream os;
    os << c.header << "condition,index,passed,skipped,value,detail\n";
    for (const auto& e : rep.entries)
        os << e.condition << ',' << e.index << ',' << (e.passed ? 1 : 0) << ',' << (e.skipped ? 1 : 0) << ','
           << format_number(e.value) << ',' << csv_field(e.detail) << '\n';
    c.res.artifacts["validation.csv"] = os.str();
    std::size_t failed = 0;
    for (const auto& e : rep.entries) failed += !e.passed;
    c.summary << "validation: " << (rep.passed() ? "passed" : "FAILED") << " (" << rep.entries.size()
              << " checks, " << failed << " failed, " << rep.indices_checked << " indices"
              << (rep.hyperbolic_only ? ", hyperbolic only" : "") << ")\n";
    for (const auto& e : rep.entries)
        if (!e.passed) c.summary << "  failed: " << e.condition << " index " << e.index << ": " << e.detail << '\n';
    return rep.passed();
}

// ---- dimension ---------------------------------------------------------

struct DimensionOutcome {
    DimensionProfile profile;
    ACVerdict verdict;
    std::optional<ExplodingVerdict> exploding;
    ExtReal h{0.0};
    double dimension = 0.0;
    double dimension_err = 0.0;
};

DimensionOutcome stage_dimension(Context& c) {
    DimensionOutcome out;
    out.h = in_stage("entropy", [&] { return c.mu.entropy(); });
    c.summary << "entropy h(mu): " << (out.h.is_finite() ? fixed6(out.h.value()) : "inf") << '\n';
    if (out.h.is_infinite() || c.cfg.uniform_u) {
        const auto dt = in_stage("entropy", [&] { return entropy_divergence_test(c.mu, kDivergenceThreshold); });
        c.summary << "entropy divergence test: h(mu_n) > " << format_number(kDivergenceThreshold)
                  << (dt.reached ? " reached at log n = " + format_number(dt.log_level)
                                 : std::string(" not reached"))
                  << " (" << dt.levels_scanned << " levels scanned)\n";
        const ExtReal h_detected = dt.reached ? ExtReal::infinity() : out.h;
        out.exploding = exploding_shortcut(c.cfg.uniform_u, h_detected);
    }

    out.profile = in_stage("profile", [&] {
        return dimension_profile(c.F, c.mu, c.cfg.t, c.cfg.n_list, c.budgets, c.seed, c.cfg.convergence_tol);
    });
    out.verdict = in_stage("classify", [&] { return ac_classify(out.profile); });

    std::ostringstream prof, lyap;
    prof << c.header << "n,h,lambda_mean,lambda_stderr,lambda_bias,D,D_err,ratio,ratio_err\n";
    lyap << c.header << "n,mean,std_error,bias_bound,n_samples,method,diverged,verdict_path\n";
    for (const auto& e : out.profile.entries) {
        const auto& l = e.lambda;
        prof << e.n << ',' << number_or_inf(e.h) << ',' << format_number(l.mean) << ',' << format_number(l.std_error)
             << ',' << format_number(l.bias_bound) << ',' << format_number(e.D) << ',' << format_number(e.D_err)
             << ',' << format_number(e.ratio) << ',' << format_number(e.ratio_err) << '\n';
        lyap << e.n << ',' << format_number(l.mean) << ',' << format_number(l.std_error) << ','
             << format_number(l.bias_bound) << ',' << l.n_samples << ',' << to_string(l.method) << ','
             << (l.diverged ? 1 : 0) << ',' << csv_field(l.verdict_path) << '\n';
    }
    c.res.artifacts["profile.csv"] = prof.str();
    c.res.artifacts["lyapunov.csv"] = lyap.str();

    c.summary << "profile (n: h_n, lambda_n, D_n):\n";
    for (const auto& e : out.profile.entries)
        c.summary << "  " << e.n << ": " << (e.h.is_finite() ? fixed6(e.h.value()) : "inf") << ", "
                  << fixed6(e.lambda.mean) << " +- " << fixed6(e.lambda.uncertainty()) << ", " << fixed6(e.D) << '\n';
    if (out.exploding) {
        out.dimension = out.exploding->dimension;
        out.dimension_err = 0.0;
        c.summary << "dimension: " << fixed6(out.dimension) << " (exploding shortcut: " << out.exploding->reason
                  << ")\n"
                  << "AC verdict: AbsolutelyContinuous (exploding shortcut, lambda <= "
                  << fixed6(out.exploding->lambda_upper) << ")\n";
    } else {
        out.dimension = out.profile.limit;
        out.dimension_err = out.profile.limit_err;
        c.summary << "dimension: " << fixed6(out.dimension) << " +- " << fixed6(out.dimension_err) << " (limit "
                  << out.profile.limit_method << ", " << (out.profile.converged ? "converged" : "NOT converged")
                  << ", max gap " << format_number(out.profile.max_gap) << ")\n"
                  << "AC verdict: " << to_string(out.verdict.verdict) << " (limsup ratio "
                  << fixed6(out.verdict.limsup_ratio) << " +- " << fixed6(out.verdict.sigma) << " over "
                  << out.verdict.tail_entries << " levels)\n";
    }
    return out;
}

// ---- attractor ---------------------------------------------------------

std::string pgm(const std::vector<double>& hist) {
    double top = 0.0;
    for (double v : hist) top = std::max(top, v);
    std::vector<std::size_t> bar(hist.size(), 0);
    for (std::size_t k = 0; k < hist.size(); ++k)
        bar[k] = top > 0.0 ? static_cast<std::size_t>(std::llround(hist[k] / top * double(kPgmHeight))) : 0;
    std::ostringstream os;
    os << "P2\n" << hist.size() << ' ' << kPgmHeight << "\n255\n";
    for (std::size_t row = 0; row < kPgmHeight; ++row) {
        const std::size_t level = kPgmHeight - row;
        for (std::size_t k = 0; k < hist.size(); ++k) os << (k ? " " : "") << (bar[k] >= level ? 0 : 255);
        os << '\n';
    }
    return os.str();
}

struct AttractorOutcome {
    std::optional<ScalingFit> box;
    std::optional<ScalingFit> local;
};

AttractorOutcome stage_attractor(Context& c) {
    const auto& a = c.cfg.attractor;
    const IntervalDomain X(c.cfg.domain_a, c.cfg.domain_b);
    auto cloud = in_stage("attractor", [&] {
        return sample_attractor(c.F.at(c.cfg.t), c.mu, a.points, a.tol, c.seed, c.jobs, a.depth_cap);
    });
    cloud.provenance.measure_id = c.cfg.measure_id;
    cloud.provenance.t = c.cfg.t;
    if (a.write_cloud) {
        std::ostringstream os;
        write_cloud_csv(os, cloud);
        c.res.artifacts["cloud.csv"] = os.str();
    }
    const auto hist = in_stage("histogram", [&] { return pushforward_histogram(cloud, X, a.bins); });
    {
        std::ostringstream os;
        os << c.header << "bin,lo,hi,mass\n";
        for (std::size_t k = 0; k < hist.size(); ++k) {
            const double lo = X.a + X.width() * double(k) / double(a.bins);
            const double hi = X.a + X.width() * double(k + 1) / double(a.bins);
            os << k << ',' << format_number(lo) << ',' << format_number(hi) << ',' << format_number(hist[k]) << '\n';
        }
        c.res.artifacts["histogram.csv"] = os.str();
        c.res.artifacts["attractor.pgm"] = pgm(hist);
    }
    std::size_t empty_interior = 0;
    for (std::size_t k = 1; k + 1 < hist.size(); ++k) empty_interior += hist[k] == 0.0;
    c.summary << "attractor: " << cloud.points.size() << " points, max err " << format_number(cloud.max_err())
              << ", " << cloud.truncated << " truncated, " << empty_interior << " empty interior bins of "
              << a.bins << '\n';

    AttractorOutcome out;
    const auto scales = in_stage("boxcount", [&] { return a.scales.empty() ? auto_scales(cloud, X) : a.scales; });
    out.box = in_stage("boxcount", [&] {
        ScalePairs pairs;
        for (const auto& [r, n] : box_count(cloud, X, scales)) pairs.emplace_back(r, static_cast<double>(n));
        return fit_dimension(pairs);
    });
    {
        std::ostringstream os;
        os << c.header;
        write_fit_csv(os, *out.box, "count");
        c.res.artifacts["boxcount.csv"] = os.str();
    }
    c.summary << "box-count dimension: " << fixed6(out.box->slope) << " (r^2 " << fixed6(out.box->r_squared)
              << ", r in [" << format_number(out.box->r_min) << ", " << format_number(out.box->r_max) << "])\n";
    if (cloud.points.size() >= 10'000) {
        const auto& radii = a.radii.empty() ? scales : a.radii;
        out.local = in_stage("localdim", [&] { return local_dim_measure(cloud, radii, a.max_centers); });
        std::ostringstream os;
        os << c.header;
        write_fit_csv(os, *out.local, "mass");
        c.res.artifacts["localdim.csv"] = os.str();
        c.summary << "local dimension: " << fixed6(out.local->slope) << " (r^2 " << fixed6(out.local->r_squared)
                  << ")\n";
        for (const auto& w : out.local->warnings) c.summary << "  warning: " << w << '\n';
    } else {
        c.summary << "local dimension: skipped (needs at least 10000 points)\n";
    }
    return out;
}

// ---- transversality ----------------------------------------------------

void stage_transversality(Context& c) {
    const auto& tc = c.cfg.transversality;
    const auto rep = in_stage("transversality", [&] {
        TransversalityOptions opt;
        opt.n_pairs = tc.pairs;
        opt.r_list = tc.r_list;
        opt.tol = tc.tol;
        opt.seed = c.seed;
        opt.adversarial_symbols = tc.adversarial_symbols;
        opt.jobs = c.jobs;
        return transversality_report(c.F, c.mu, ParamGrid(c.cfg.box, tc.grid), opt);
    });
    std::ostringstream os;
    os << c.header;
    write_transversality_csv(os, rep);
    c.res.artifacts["transversality.csv"] = os.str();
    c.summary << transversality_summary(rep);
}

// ---- sweep -------------------------------------------------------------

struct SweepRow {
    std::vector<double> t;
    bool ok = false;
    std::string stage;
    std::string message;
    double limit = 0.0;
    double limit_err = 0.0;
    std::string verdict;
    bool converged = false;
    double ratio = 0.0;
    double sigma = 0.0;
};

void stage_sweep(Context& c) {
    const ParamGrid grid(c.cfg.box, c.cfg.grid);
    std::vector<SweepRow> rows(grid.size());
    LyapunovBudgets inner = c.budgets;
    inner.jobs = 1;
    parallel_for(grid.size(), c.jobs, [&](std::size_t g) {
        SweepRow& row = rows[g];
        row.t = grid.point(g);
        try {
            const auto rep = in_stage("validate", [&] {
                return validate_system(c.F.at(row.t), c.cfg.validation_grid, c.cfg.validation_indices);
            });
            if (!rep.passed()) throw StageError("validate", "system fails validation");
            const auto p = in_stage("profile", [&] {
                return dimension_profile(c.F, c.mu, row.t, c.cfg.n_list, inner, c.seed, c.cfg.convergence_tol);
            });
            const auto v = in_stage("classify", [&] { return ac_classify(p); });
            row.limit = p.limit;
            row.limit_err = p.limit_err;
            row.converged = p.converged;
            row.verdict = to_string(v.verdict);
            row.ratio = v.limsup_ratio;
            row.sigma = v.sigma;
            row.ok = true;
        } catch (const StageError& e) {
            row.stage = e.stage();
            row.message = e.what();
        }
    });

    std::ostringstream os;
    os << c.header;
    for (std::size_t a = 0; a < grid.dim(); ++a) os << 't' << (a + 1) << ',';
    os << "limit,limit_err,verdict,converged,limsup_ratio,ratio_sigma,status\n";
    double sup = 0.0;
    std::size_t failed = 0, ac = 0;
    for (const auto& r : rows) {
        for (double v : r.t) os << format_number(v) << ',';
        if (r.ok) {
            os << format_number(r.limit) << ',' << format_number(r.limit_err) << ',' << r.verdict << ','
               << (r.converged ? 1 : 0) << ',' << format_number(r.ratio) << ',' << format_number(r.sigma) << ",ok\n";
            sup = std::max(sup, r.ratio);
            ac += r.verdict == "AbsolutelyContinuousRegion";
        } else {
            os << ",,,,,," << csv_field("failed:" + r.stage) << '\n';
            ++failed;
        }
    }
    c.res.artifacts["sweep.csv"] = os.str();
    c.summary << "sweep: " << rows.size() << " points, " << failed << " failed, " << ac
              << " in the absolutely continuous region\n"
              << "sup ratio over the grid: " << fixed6(sup) << '\n';
    for (std::size_t g = 0; g < rows.size(); ++g)
        if (!rows[g].ok)
            c.summary << "  point " << g << " (t=" << join_t(rows[g].t) << ") failed in " << rows[g].stage << ": "
                      << rows[g].message << '\n';
    if (c.cfg.alpha) {
        const int d = static_cast<int>(grid.dim());
        const double bound = exceptional_bound(sup, *c.cfg.alpha, d);
        std::ostringstream ex;
        ex << c.header << "sup_ratio,alpha,d,bound\n"
           << format_number(sup) << ',' << format_number(*c.cfg.alpha) << ',' << d << ',' << format_number(bound)
           << '\n';
        c.res.artifacts["exceptional.csv"] = ex.str();
        c.summary << "exceptional-set dimension bound: " << fixed6(bound) << " (alpha " << format_number(*c.cfg.alpha)
                  << ", d " << d << ")\n";
    }
}

void write_outputs(const Context& c, RunResult& res) {
    nlohmann::ordered_json m;
    m["tool"] = "pifs-lab";
    m["version"] = kVersion;
    m["experiment"] = c.cfg.name;
    m["kind"] = to_string(c.kind);
    m["config_hash"] = "fnv1a64:" + hex64(c.cfg.config_hash);
    m["seed"] = c.seed;
    m["status"] = res.exit_code == 0 ? "ok" : "failed";
    if (res.exit_code != 0) m["failed_stage"] = res.stage;
    nlohmann::ordered_json arts = nlohmann::ordered_json::object();
    for (const auto& [name, body] : res.artifacts) arts[name] = "fnv1a64:" + hex64(fnv1a64(body));
    m["artifacts"] = arts;

    std::filesystem::create_directories(res.out_dir);
    auto put = [&](const std::string& name, const std::string& body) {
        std::ofstream f(res.out_dir / name, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + (res.out_dir / name).string());
        f << body;
        if (!f) throw std::runtime_error("write failed for " + (res.out_dir / name).string());
    };
    for (const auto& [name, body] : res.artifacts) put(name, body);
    put("manifest.json", m.dump(2) + "\n");
}

} // namespace

std::filesystem::path resolve_output_base(const ExperimentConfig& cfg, const RunOptions& opt) {
    if (opt.out_dir && !opt.out_dir->empty()) return *opt.out_dir;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    if (const char* env = std::getenv("PIFS_LAB_OUT"); env && *env) return env;
    return "pifs-lab-out";
}

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
    const RunKind kind = opt.kind.value_or(cfg.kind);
    check_run_requirements(cfg, kind);
    RunResult res;
    res.out_dir = resolve_output_base(cfg, opt) / cfg.name;
    const std::uint64_t seed = opt.seed.value_or(cfg.seed);
    LyapunovBudgets budgets = cfg.budgets;
    budgets.jobs = std::max(1u, opt.jobs);

    Context c{cfg, kind, seed, std::max(1u, opt.jobs), build_family(cfg), build_measure(cfg), budgets, {}, res, {}};
    c.header = "# pifs-lab " + std::string(kVersion) + " experiment=" + cfg.name + " kind=" + to_string(kind) +
               " config=" + hex64(cfg.config_hash) + " seed=" + std::to_string(seed) +
               (cfg.parametrized && kind != RunKind::Sweep && kind != RunKind::Transversality ? " t=" + join_t(cfg.t)
                                                                                               : std::string()) +
               " measure=" + cfg.measure_id + " budgets=" + budgets_string(budgets) + "\n";
    c.summary << "pifs-lab " << kVersion << "  experiment: " << cfg.name << "  kind: " << to_string(kind) << '\n'
              << "config hash: " << hex64(cfg.config_hash) << "  seed: " << seed << '\n'
              << "measure: " << cfg.measure_id << '\n';
    if (cfg.parametrized && kind != RunKind::Sweep && kind != RunKind::Transversality)
        c.summary << "parameter t: " << join_t(cfg.t) << '\n';

    try {
        switch (kind) {
            case RunKind::Validate:
                if (!stage_validate(c)) throw StageError("validate", "system fails validation");
                break;
            case RunKind::Dimension:
                if (!stage_validate(c)) throw StageError("validate", "system fails validation");
                stage_dimension(c);
                break;
            case RunKind::Sweep: stage_sweep(c); break;
            case RunKind::Attractor: stage_attractor(c); break;
            case RunKind::Transversality: stage_transversality(c); break;
            case RunKind::Report: {
                if (!stage_validate(c)) throw StageError("validate", "system fails validation");
                const auto dim = stage_dimension(c);
                const auto att = stage_attractor(c);
                c.summary << "cross-check: |box-count - formula| = " << fixed6(std::abs(att.box->slope - dim.dimension));
                if (att.local)
                    c.summary << ", |local - formula| = " << fixed6(std::abs(att.local->slope - dim.dimension));
                c.summary << '\n';
                if (cfg.transversality.present) stage_transversality(c);
                break;
            }
        }
    } catch (const StageError& e) {
        res.exit_code = 1;
        res.stage = e.stage();
        res.message = e.what();
        c.summary << "FAILED in stage " << e.stage() << ": " << e.what() << '\n';
    }
    res.summary = c.summary.str();
    res.artifacts["summary.txt"] = res.summary;
    try {
        write_outputs(c, res);
    } catch (const std::exception& e) {
        res.exit_code = 1;
        res.stage = "write";
        res.message = e.what();
    }
    return res;
}

int run_config_file(const std::string& path, const RunOptions& opt) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(path);
        check_run_requirements(cfg, opt.kind.value_or(cfg.kind));
    } catch (const ConfigError& e) {
        std::cerr << path << ':' << e.line() << ": " << (e.key().empty() ? "" : e.key() + ": ") << e.message()
                  << '\n';
        return 2;
    }
    const auto res = run_experiment(cfg, opt);
    std::cout << res.summary;
    if (res.exit_code != 0)
        std::cerr << "pifs-lab: stage '" << res.stage << "' failed: " << res.message << '\n';
    else
        std::cout << "artifacts written to " << res.out_dir.string() << '\n';
    return res.exit_code;
}

} // namespace pifs
