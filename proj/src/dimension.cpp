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

#include "pifs/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pifs {

double dimension_formula(ExtReal h, ExtReal lambda) {
    if (!(lambda > ExtReal(0.0))) throw std::domain_error("dimension_formula: lambda must be > 0");
    if (h < ExtReal(0.0)) throw std::domain_error("dimension_formula: h must be >= 0");
    if (h.is_infinite() && lambda.is_infinite())
        throw std::domain_error("dimension_formula: inf / inf is indeterminate");
    if (h.is_infinite()) return 1.0;
    if (lambda.is_infinite()) return 0.0;
    return std::min(h.value() / lambda.value(), 1.0);
}

ProfileEntry make_profile_entry(Symbol n, ExtReal h, const LyapunovEstimate& lambda) {
    ProfileEntry e;
    e.n = n;
    e.h = h;
    e.lambda = lambda;
    if (lambda.diverged) {
        if (h.is_infinite()) throw std::domain_error("dimension profile: inf / inf at n = " + std::to_string(n));
        e.D = 0.0;
        e.ratio = 0.0;
        return e;
    }
    if (h.is_infinite()) {
        e.D = 1.0;
        e.ratio = std::numeric_limits<double>::infinity();
        return e;
    }
    e.D = dimension_formula(h, ExtReal(lambda.mean));
    e.ratio = h.value() / lambda.mean;
    e.ratio_err = h.value() * lambda.uncertainty() / (lambda.mean * lambda.mean);
    e.D_err = e.ratio - e.ratio_err < 1.0 ? e.ratio_err : 0.0;
    return e;
}

void finalize_profile(DimensionProfile& p) {
    if (p.entries.empty()) throw std::domain_error("dimension profile: no entries");
    const std::size_t m = p.entries.size();
    p.limit = p.entries.back().D;
    p.limit_err = p.entries.back().D_err;
    p.max_gap = 0.0;
    for (std::size_t k = m >= 3 ? m - 2 : 1; k < m; ++k)
        p.max_gap = std::max(p.max_gap, std::abs(p.entries[k].D - p.entries[k - 1].D));
    p.converged = m >= 3 && p.max_gap <= p.convergence_tol;
}

DimensionProfile dimension_profile(const FamilySpec& F, const BernoulliSpec& mu, std::span<const double> t,
                                   std::span<const Symbol> n_list, const LyapunovBudgets& budgets,
                                   std::uint64_t seed, double convergence_tol) {
    if (n_list.size() < 3) throw std::domain_error("dimension_profile: need at least 3 levels");
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (!(n_list[k] > n_list[k - 1]))
            throw std::domain_error("dimension_profile: n_list must be increasing");
    DimensionProfile p;
    p.t.assign(t.begin(), t.end());
    p.convergence_tol = convergence_tol;
    const auto shared = std::make_shared<const BernoulliSpec>(mu);
    for (Symbol n : n_list) {
        const auto mu_n = concentrate(shared, n);
        const auto S_n = truncate(F, n).at(t);
        p.entries.push_back(make_profile_entry(n, entropy(mu_n), lyapunov(S_n, mu_n.law(), budgets, seed)));
    }
    finalize_profile(p);
    return p;
}

std::string to_string(ACVerdictKind v) {
    switch (v) {
        case ACVerdictKind::AbsolutelyContinuousRegion: return "AbsolutelyContinuousRegion";
        case ACVerdictKind::Subcritical: return "Subcritical";
        case ACVerdictKind::Inconclusive: return "Inconclusive";
    }
    return "";
}

ACVerdict ac_classify(const DimensionProfile& profile) {
    const auto& es = profile.entries;
    if (es.size() < 3) throw std::domain_error("ac_classify: need at least 3 entries");
    const std::size_t tail = std::max<std::size_t>(3, (es.size() + 1) / 2);
    ACVerdict v;
    v.tail_entries = tail;
    bool all_below = true;
    std::size_t best = es.size() - tail;
    for (std::size_t k = es.size() - tail; k < es.size(); ++k) {
        if (es[k].ratio > es[best].ratio) best = k;
        if (!(es[k].ratio + 3.0 * es[k].ratio_err < 1.0)) all_below = false;
    }
    v.limsup_ratio = es[best].ratio;
    v.sigma = es[best].ratio_err;
    if (v.limsup_ratio - 3.0 * v.sigma > 1.0)
        v.verdict = ACVerdictKind::AbsolutelyContinuousRegion;
    else if (all_below)
        v.verdict = ACVerdictKind::Subcritical;
    else
        v.verdict = ACVerdictKind::Inconclusive;
    return v;
}

double exceptional_bound(double sup_ratio, double alpha, int d) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("exceptional_bound: alpha must lie in (0, 1)");
    if (!(sup_ratio >= 0.0)) throw std::domain_error("exceptional_bound: sup_ratio must be >= 0");
    if (d < 1) throw std::domain_error("exceptional_bound: d must be >= 1");
    return std::min(sup_ratio, alpha) + static_cast<double>(d) - 1.0;
}

std::optional<ExplodingVerdict> exploding_shortcut(std::optional<double> uniform_u, ExtReal h) {
    if (!uniform_u || !(*uniform_u > 0.0 && *uniform_u < 1.0)) return std::nullopt;
    if (h.is_finite()) return std::nullopt;
    ExplodingVerdict v;
    v.u = *uniform_u;
    v.lambda_upper = -std::log(*uniform_u);
    v.reason = "infinite entropy with lambda <= -log u = " + std::to_string(v.lambda_upper) +
               ": dimension 1 and absolutely continuous for a.e. t";
    return v;
}

} // namespace pifs
