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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pifs/exponents.hpp"
#include "pifs/extended_real.hpp"

namespace pifs {

/// min{h / lambda, 1}, with h = inf, lambda finite -> 1 and h finite,
/// lambda = inf -> 0. Throws for lambda <= 0 and for inf / inf.
double dimension_formula(ExtReal h, ExtReal lambda);

struct ProfileEntry {
    Symbol n = 0;
    ExtReal h{0.0};
    LyapunovEstimate lambda;
    double D = 0.0;
    double D_err = 0.0;
    /// Uncapped ratio h / lambda (+inf when h is) and its first-order error.
    double ratio = 0.0;
    double ratio_err = 0.0;
};

struct DimensionProfile {
    std::vector<ProfileEntry> entries;
    std::vector<double> t;
    double limit = 0.0;
    double limit_err = 0.0;
    bool converged = false;
    /// Largest successive change of D among the final three entries.
    double max_gap = 0.0;
    double convergence_tol = 1e-3;
    std::string limit_method = "last-entry";
};

/// Builds a profile entry from h and a Lyapunov estimate, propagating the
/// estimator uncertainty to first order.
ProfileEntry make_profile_entry(Symbol n, ExtReal h, const LyapunovEstimate& lambda);

/// Sets limit, limit_err, max_gap and converged from the entries.
void finalize_profile(DimensionProfile& profile);

/// (h_{mu_n}, lambda_{mu_n}, D_n) for each n on the truncated family.
DimensionProfile dimension_profile(const FamilySpec& F, const BernoulliSpec& mu, std::span<const double> t,
                                   std::span<const Symbol> n_list, const LyapunovBudgets& budgets,
                                   std::uint64_t seed, double convergence_tol = 1e-3);

enum class ACVerdictKind { AbsolutelyContinuousRegion, Subcritical, Inconclusive };

std::string to_string(ACVerdictKind v);

struct ACVerdict {
    ACVerdictKind verdict = ACVerdictKind::Inconclusive;
    /// Largest uncapped ratio over the tail of the profile and its sigma.
    double limsup_ratio = 0.0;
    double sigma = 0.0;
    std::size_t tail_entries = 0;
};

/// Classifies by the uncapped ratio over the last max(3, ceil(len / 2))
/// entries: AC region when max - 3 sigma > 1, subcritical when every tail
/// entry has ratio + 3 sigma < 1.
ACVerdict ac_classify(const DimensionProfile& profile);

/// min{sup_ratio, alpha} + d - 1.
double exceptional_bound(double sup_ratio, double alpha, int d);

struct ExplodingVerdict {
    double dimension = 1.0;
    bool absolutely_continuous = true;
    double u = 0.0;
    /// lambda <= -log u for every measure on a family with uniform u.
    double lambda_upper = 0.0;
    std::string reason;
};

/// Verdict for infinite entropy on a family with a uniform derivative lower
/// bound u in (0, 1); nothing otherwise.
std::optional<ExplodingVerdict> exploding_shortcut(std::optional<double> uniform_u, ExtReal h);

} // namespace pifs
