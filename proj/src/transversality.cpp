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

#include "pifs/transversality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pifs/parallel.hpp"
#include "pifs/random.hpp"

namespace pifs {

namespace {

constexpr std::size_t kMaxRejections = 256;

std::vector<double> sorted_radii(const std::vector<double>& r_list) {
    if (r_list.empty()) throw std::invalid_argument("empty r list");
    std::vector<double> r = r_list;
    std::sort(r.begin(), r.end());
    if (!(r.front() > 0.0)) throw std::invalid_argument("radii must be positive");
    if (r.back() < 8.0 * r.front()) throw std::invalid_argument("r list must span at least 3 dyadic decades");
    return r;
}

void check_resolution(const ParamGrid& grid, double rmin) {
    for (std::size_t a = 0; a < grid.dim(); ++a)
        if (grid.resolution(a) > rmin / 10.0)
            throw std::invalid_argument("grid resolution on axis " + std::to_string(a) + " exceeds min r / 10");
}

// max/min over positive entries; all-zero tables count as stable.
bool stable(const std::vector<double>& v) {
    double lo = 0.0, hi = 0.0;
    for (double x : v)
        if (x > 0.0) {
            lo = lo == 0.0 ? x : std::min(lo, x);
            hi = std::max(hi, x);
        }
    return lo == 0.0 || hi / lo <= 2.0;
}

SymbolFn constant_word(Symbol head, Symbol tail) {
    return [head, tail](std::size_t k) { return k == 0 ? head : tail; };
}

} // namespace

ParamGrid::ParamGrid(ParamBox box, std::vector<std::size_t> counts) : box_(std::move(box)), counts_(std::move(counts)) {
    if (counts_.size() != box_.dim() || counts_.empty())
        throw std::invalid_argument("grid counts must match the parameter dimension");
    size_ = 1;
    for (auto c : counts_) {
        if (c == 0) throw std::invalid_argument("grid counts must be positive");
        size_ *= c;
    }
}

double ParamGrid::resolution(std::size_t axis) const {
    const auto& [lo, hi] = box_.axes.at(axis);
    return (hi - lo) / static_cast<double>(counts_[axis]);
}

std::vector<double> ParamGrid::point(std::size_t index) const {
    std::vector<double> t(dim());
    for (std::size_t a = dim(); a-- > 0;) {
        const std::size_t k = index % counts_[a];
        index /= counts_[a];
        t[a] = box_.axes[a].first + (static_cast<double>(k) + 0.5) * resolution(a);
    }
    return t;
}

SeparationProfile pair_separation_profile(const FamilySpec& F, const ParamGrid& grid, const SymbolFn& omega,
                                          const SymbolFn& tau, double tol, unsigned jobs) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (omega(0) == tau(0)) throw std::invalid_argument("words must differ in their first symbol");
    SeparationProfile p;
    p.f.resize(grid.size());
    p.err.resize(grid.size());
    parallel_for(grid.size(), jobs, [&](std::size_t g) {
        const auto t = grid.point(g);
        const SystemSpec S = F.at(t);
        const auto a = project(S, omega, tol);
        const auto b = project(S, tau, tol);
        p.f[g] = std::abs(a.x - b.x);
        p.err[g] = a.err + b.err;
    });
    p.min_f = *std::min_element(p.f.begin(), p.f.end());
    const double max_err = *std::max_element(p.err.begin(), p.err.end());
    if (p.min_f <= 10.0 * max_err)
        p.warnings.push_back("tol too coarse: min separation " + format_number(p.min_f) + " below 10 x error " +
                             format_number(max_err));
    return p;
}

SeparationProfile pair_separation_profile(const FamilySpec& F, const ParamGrid& grid, const CodedWord& omega,
                                          const CodedWord& tau, double tol, unsigned jobs) {
    if (!omega.infinite() || !tau.infinite()) throw std::invalid_argument("separation needs infinite words");
    return pair_separation_profile(F, grid, SymbolFn(omega), SymbolFn(tau), tol, jobs);
}

double sublevel_measure(const std::vector<double>& f, const ParamGrid& grid, double r) {
    const auto hits = std::count_if(f.begin(), f.end(), [r](double v) { return v <= r; });
    return static_cast<double>(hits) / static_cast<double>(grid.size()) * grid.box().volume();
}

std::size_t sublevel_cover(const std::vector<double>& f, const ParamGrid& grid, double r) {
    if (grid.dim() == 1) {
        // Greedy left-to-right cover by closed intervals of length r, which is optimal in 1D.
        std::size_t count = 0;
        double reach = -std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < grid.size(); ++g) {
            if (!(f[g] <= r)) continue;
            const double t = grid.point(g)[0];
            if (t > reach) {
                ++count;
                reach = t + r;
            }
        }
        return count;
    }
    std::vector<std::vector<long long>> cells;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (!(f[g] <= r)) continue;
        const auto t = grid.point(g);
        std::vector<long long> c(grid.dim());
        for (std::size_t a = 0; a < grid.dim(); ++a)
            c[a] = static_cast<long long>(std::floor((t[a] - grid.box().axes[a].first) / r));
        cells.push_back(std::move(c));
    }
    std::sort(cells.begin(), cells.end());
    return static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

TransversalityReport analyze_fields(const std::vector<std::vector<double>>& fields, const ParamGrid& grid,
                                    const std::vector<double>& r_list) {
    const auto radii = sorted_radii(r_list);
    check_resolution(grid, radii.front());
    TransversalityReport rep;
    rep.pairs_tested = fields.size();
    rep.grid_counts = grid.counts();
    rep.d = grid.dim();
    for (const auto& f : fields)
        if (f.size() != grid.size()) throw std::invalid_argument("field size does not match the grid");
    std::vector<double> ratios, normalized;
    for (double r : radii) {
        C1Row a{r, 0.0, 0.0};
        C2Row b{r, 0, 0.0};
        for (const auto& f : fields) {
            a.measure = std::max(a.measure, sublevel_measure(f, grid, r));
            b.cover_count = std::max(b.cover_count, sublevel_cover(f, grid, r));
        }
        a.ratio = a.measure / r;
        b.normalized = static_cast<double>(b.cover_count) * std::pow(r, static_cast<double>(rep.d) - 1.0);
        rep.C1_hat = std::max(rep.C1_hat, a.ratio);
        rep.C2_hat = std::max(rep.C2_hat, b.normalized);
        ratios.push_back(a.ratio);
        normalized.push_back(b.normalized);
        rep.c1.push_back(a);
        rep.c2.push_back(b);
    }
    rep.C1_stable = stable(ratios);
    rep.C2_stable = stable(normalized);
    return rep;
}

TransversalityReport transversality_report(const FamilySpec& F, const BernoulliSpec& mu, const ParamGrid& grid,
                                           const TransversalityOptions& opt) {
    const auto radii = sorted_radii(opt.r_list);
    check_resolution(grid, radii.front());
    if (grid.box().axes != F.param_domain().axes) throw std::invalid_argument("grid box differs from the family's U");

    std::vector<std::pair<SymbolFn, SymbolFn>> pairs;
    std::vector<std::string> warnings;

    // Fixed-point words i^inf vs j^inf and j i^inf vs i^inf.
    Symbol k = opt.adversarial_symbols;
    if (auto m = mu.support_max()) k = std::min(k, *m);
    if (auto m = F.max_index()) k = std::min(k, *m);
    std::size_t adversarial = 0;
    for (Symbol i = 1; i <= k; ++i)
        for (Symbol j = i + 1; j <= k; ++j) {
            pairs.emplace_back(constant_word(i, i), constant_word(j, j));
            pairs.emplace_back(constant_word(j, i), constant_word(i, i));
            adversarial += 2;
        }

    const std::uint64_t base = derive_seed(opt.seed, Purpose::TransversalityPairs);
    const std::uint64_t tau_base = derive_seed(opt.seed, Purpose::TransversalityPairs, 1);
    std::size_t sampled = 0;
    for (std::size_t p = 0; p < opt.n_pairs; ++p) {
        SymbolFn omega = measure_word(mu, base, p);
        const Symbol first = omega(0);
        const CounterStream ts(tau_base, p);
        std::size_t offset = 0;
        while (offset < kMaxRejections && mu.sample(ts.uniform(offset)) == first) ++offset;
        if (offset == kMaxRejections) {
            warnings.push_back("pair " + std::to_string(p) + " skipped: no distinct first symbol after " +
                               std::to_string(kMaxRejections) + " draws");
            continue;
        }
        pairs.emplace_back(std::move(omega), measure_word(mu, tau_base, p, offset));
        ++sampled;
    }

    std::vector<std::vector<double>> fields;
    fields.reserve(pairs.size());
    for (const auto& [w, v] : pairs) {
        auto prof = pair_separation_profile(F, grid, w, v, opt.tol, opt.jobs);
        for (auto& s : prof.warnings) warnings.push_back(std::move(s));
        fields.push_back(std::move(prof.f));
    }
    auto rep = analyze_fields(fields, grid, radii);
    rep.sampled_pairs = sampled;
    rep.adversarial_pairs = adversarial;
    rep.tol = opt.tol;
    rep.seed = opt.seed;
    rep.warnings = std::move(warnings);
    return rep;
}

TransversalityReport estimate_C1(const FamilySpec& F, const BernoulliSpec& mu, std::size_t n_pairs,
                                 const std::vector<double>& r_list, const ParamGrid& grid, double tol,
                                 std::uint64_t seed, unsigned jobs) {
    TransversalityOptions opt;
    opt.n_pairs = n_pairs;
    opt.r_list = r_list;
    opt.tol = tol;
    opt.seed = seed;
    opt.jobs = jobs;
    return transversality_report(F, mu, grid, opt);
}

TransversalityReport estimate_C2(const FamilySpec& F, const BernoulliSpec& mu, std::size_t n_pairs,
                                 const std::vector<double>& r_list, const ParamGrid& grid, double tol,
                                 std::uint64_t seed, unsigned jobs) {
    return estimate_C1(F, mu, n_pairs, r_list, grid, tol, seed, jobs);
}

void write_transversality_csv(std::ostream& os, const TransversalityReport& rep) {
    os << "# heuristic pairs=" << rep.pairs_tested << " sampled=" << rep.sampled_pairs
       << " adversarial=" << rep.adversarial_pairs << " grid=";
    for (std::size_t a = 0; a < rep.grid_counts.size(); ++a) os << (a ? "x" : "") << rep.grid_counts[a];
    os << " tol=" << format_number(rep.tol) << " seed=" << rep.seed << '\n';
    os << "r,measure,ratio,cover_count,normalized_count\n";
    for (std::size_t k = 0; k < rep.c1.size(); ++k)
        os << format_number(rep.c1[k].r) << ',' << format_number(rep.c1[k].measure) << ','
           << format_number(rep.c1[k].ratio) << ',' << rep.c2[k].cover_count << ','
           << format_number(rep.c2[k].normalized) << '\n';
}

std::string transversality_summary(const TransversalityReport& rep) {
    std::ostringstream os;
    os << "HEURISTIC DIAGNOSTIC: finitely many pairs and grid points, not a proof of transversality\n"
       << "pairs tested: " << rep.pairs_tested << " (" << rep.sampled_pairs << " sampled, " << rep.adversarial_pairs
       << " adversarial)\n"
       << "grid points: " << std::accumulate(rep.grid_counts.begin(), rep.grid_counts.end(), std::size_t{1},
                                             std::multiplies<>())
       << " parameter dimension: " << rep.d << '\n'
       << "C1_hat = " << format_number(rep.C1_hat) << (rep.C1_stable ? " (stable)" : " (unstable)") << '\n'
       << "C2_hat = " << format_number(rep.C2_hat) << (rep.C2_stable ? " (stable)" : " (unstable)") << '\n';
    for (const auto& w : rep.warnings) os << "warning: " << w << '\n';
    return os.str();
}

} // namespace pifs
