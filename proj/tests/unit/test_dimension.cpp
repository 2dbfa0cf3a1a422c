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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "pifs/dimension.hpp"

using doctest::Approx;
using namespace pifs;

namespace {

const IntervalDomain kUnit(0.0, 1.0);
const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);
const std::vector<double> kT = {0.5};

FamilySpec affine_family(std::vector<MapSpec> maps) {
    return FamilySpec::constant(SystemSpec::finite(kUnit, std::nullopt, std::move(maps)), ParamBox{{{0.0, 1.0}}});
}

DimensionProfile synthetic(const std::vector<double>& h, const std::vector<double>& lam,
                           const std::vector<double>& sd) {
    DimensionProfile p;
    for (std::size_t k = 0; k < h.size(); ++k) {
        LyapunovEstimate e;
        e.mean = lam[k];
        e.std_error = sd[k];
        p.entries.push_back(make_profile_entry(Symbol(k + 2), ExtReal(h[k]), e));
    }
    finalize_profile(p);
    return p;
}

} // namespace

TEST_CASE("dimension_formula examples and conventions") {
    CHECK(dimension_formula(ExtReal(kLog2), ExtReal(kLog3)) == Approx(0.630929753571457).epsilon(1e-14));
    CHECK(dimension_formula(ExtReal(2 * kLog2), ExtReal(kLog2)) == 1.0);
    CHECK(dimension_formula(ExtReal::infinity(), ExtReal(kLog3)) == 1.0);
    CHECK(dimension_formula(ExtReal(1.0), ExtReal::infinity()) == 0.0);
    CHECK_THROWS_AS(dimension_formula(ExtReal::infinity(), ExtReal::infinity()), std::domain_error);
    CHECK_THROWS_AS(dimension_formula(ExtReal(1.0), ExtReal(0.0)), std::domain_error);
    CHECK_THROWS_AS(dimension_formula(ExtReal(1.0), ExtReal(-1.0)), std::domain_error);
}

TEST_CASE("property: dimension_formula is bounded and monotone") {
    const std::vector<double> hs = {0.0, 0.1, 0.5, 1.0, 2.0, 5.0};
    const std::vector<double> ls = {0.05, 0.3, 1.0, 3.0, 10.0};
    for (double l : ls)
        for (std::size_t k = 0; k < hs.size(); ++k) {
            const double d = dimension_formula(ExtReal(hs[k]), ExtReal(l));
            CHECK(d >= 0.0);
            CHECK(d <= 1.0);
            if (k > 0) CHECK(d >= dimension_formula(ExtReal(hs[k - 1]), ExtReal(l)));
        }
    for (double h : hs)
        for (std::size_t k = 1; k < ls.size(); ++k)
            CHECK(dimension_formula(ExtReal(h), ExtReal(ls[k])) <= dimension_formula(ExtReal(h), ExtReal(ls[k - 1])));
}

TEST_CASE("dimension_profile examples") {
    LyapunovBudgets b;
    const auto cantor = affine_family({MapSpec::affine(1.0 / 3.0, 0.0), MapSpec::affine(1.0 / 3.0, 2.0 / 3.0)});
    const std::vector<Symbol> ns = {2};
    const auto one = std::vector<Symbol>{2};
    CHECK_THROWS_AS(dimension_profile(cantor, BernoulliSpec::uniform(2), kT, one, b, 1), std::domain_error);

    // Cantor system only has two maps; uniform measure saturates at n = 2.
    const auto mu = BernoulliSpec::uniform(2);
    const std::vector<Symbol> n2 = {2, 3, 4};
    const auto F3 = affine_family({MapSpec::affine(1.0 / 3.0, 0.0), MapSpec::affine(1.0 / 3.0, 2.0 / 3.0),
                                   MapSpec::affine(1.0 / 3.0, 1.0 / 3.0), MapSpec::affine(0.1, 0.0)});
    const auto p = dimension_profile(F3, mu, kT, n2, b, 1);
    for (const auto& e : p.entries) {
        CHECK(e.D == Approx(kLog2 / kLog3).epsilon(1e-14));
        CHECK(e.D == p.entries.front().D);
    }
    CHECK(p.converged);
    CHECK(p.limit == Approx(0.630930).epsilon(1e-6));

    // p_i = 2^-i and r_i = 3^-i: D_n -> 2 log 2 / (2 log 3)
    const auto G = FamilySpec::constant(
        SystemSpec(kUnit, std::nullopt, [](Symbol i) { return MapSpec::affine(std::pow(3.0, -double(i)), 0.5); },
                   std::nullopt),
        ParamBox{{{0.0, 1.0}}});
    const std::vector<Symbol> nl = {5, 10, 20, 30, 40, 50};
    const auto q = dimension_profile(G, BernoulliSpec::geometric(0.5), kT, nl, b, 1);
    CHECK(q.converged);
    CHECK(q.limit == Approx(kLog2 / kLog3).epsilon(1e-9));
    for (const auto& e : q.entries) {
        CHECK(e.D >= 0.0);
        CHECK(e.D <= 1.0);
    }
}

TEST_CASE("ac_classify examples") {
    LyapunovBudgets b;
    const std::vector<Symbol> ns = {3, 4, 5};
    const auto overlap = affine_family(
        {MapSpec::affine(0.45, 0.0), MapSpec::affine(0.45, 0.275), MapSpec::affine(0.45, 0.55)});
    const auto p = dimension_profile(overlap, BernoulliSpec::uniform(3), kT, std::vector<Symbol>{2, 3, 4}, b, 1);
    const auto v = ac_classify(p);
    CHECK(v.verdict == ACVerdictKind::AbsolutelyContinuousRegion);
    CHECK(v.limsup_ratio == Approx(std::log(3.0) / -std::log(0.45)).epsilon(1e-13));
    CHECK(v.limsup_ratio == Approx(1.3758).epsilon(1e-4));

    const auto cantor = affine_family({MapSpec::affine(1.0 / 3.0, 0.0), MapSpec::affine(1.0 / 3.0, 2.0 / 3.0)});
    const auto c = dimension_profile(cantor, BernoulliSpec::uniform(2), kT, std::vector<Symbol>{2, 3, 4}, b, 1);
    CHECK(ac_classify(c).verdict == ACVerdictKind::Subcritical);

    // ratios straddling 1 within their CI
    const auto osc = synthetic({1.0, 1.0, 1.0, 1.0}, {0.98, 1.02, 0.99, 1.01}, {0.02, 0.02, 0.02, 0.02});
    CHECK(ac_classify(osc).verdict == ACVerdictKind::Inconclusive);

    const auto inf = synthetic({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {0, 0, 0});
    DimensionProfile infinite = inf;
    infinite.entries.back() = make_profile_entry(9, ExtReal::infinity(), inf.entries.back().lambda);
    CHECK(ac_classify(infinite).verdict == ACVerdictKind::AbsolutelyContinuousRegion);

    DimensionProfile two = inf;
    two.entries.pop_back();
    CHECK_THROWS_AS(ac_classify(two), std::domain_error);
}

TEST_CASE("property: ac_classify is invariant under common rescaling") {
    const std::vector<std::vector<double>> hs = {{0.9, 1.0, 1.1, 1.2}, {0.5, 0.55, 0.6, 0.6}, {1.0, 1.0, 1.0, 1.0}};
    const std::vector<double> lam = {1.0, 1.01, 0.99, 1.0};
    const std::vector<double> sd = {0.01, 0.02, 0.01, 0.03};
    for (const auto& h : hs)
        for (double c : {1e-3, 0.5, 7.0, 1e4}) {
            std::vector<double> hc, lc, sc;
            for (std::size_t k = 0; k < h.size(); ++k) {
                hc.push_back(c * h[k]);
                lc.push_back(c * lam[k]);
                sc.push_back(c * sd[k]);
            }
            CHECK(ac_classify(synthetic(hc, lc, sc)).verdict == ac_classify(synthetic(h, lam, sd)).verdict);
        }
}

TEST_CASE("exceptional_bound examples and monotonicity") {
    CHECK(exceptional_bound(0.5, 0.8, 1) == 0.5);
    CHECK(exceptional_bound(0.9, 0.8, 1) == 0.8);
    CHECK(exceptional_bound(0.5, 0.8, 2) == 1.5);
    CHECK_THROWS_AS(exceptional_bound(0.5, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(exceptional_bound(0.5, 0.0, 1), std::domain_error);
    CHECK_THROWS_AS(exceptional_bound(-0.1, 0.5, 1), std::domain_error);
    const std::vector<double> s = {0.0, 0.2, 0.7, 1.5};
    const std::vector<double> a = {0.1, 0.5, 0.9};
    for (int d = 1; d <= 3; ++d)
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < a.size(); ++j) {
                const double k = exceptional_bound(s[i], a[j], d);
                if (i > 0) CHECK(k >= exceptional_bound(s[i - 1], a[j], d));
                if (j > 0) CHECK(k >= exceptional_bound(s[i], a[j - 1], d));
                if (d > 1) CHECK(k >= exceptional_bound(s[i], a[j], d - 1));
            }
}

TEST_CASE("exploding_shortcut examples") {
    const auto v = exploding_shortcut(1.0 / 3.0, ExtReal::infinity());
    REQUIRE(v.has_value());
    CHECK(v->dimension == 1.0);
    CHECK(v->absolutely_continuous);
    CHECK(v->lambda_upper == Approx(kLog3));
    CHECK_FALSE(exploding_shortcut(std::nullopt, ExtReal::infinity()).has_value());
    CHECK_FALSE(exploding_shortcut(1.0 / 3.0, ExtReal(2.0)).has_value());
    CHECK_FALSE(exploding_shortcut(1.0, ExtReal::infinity()).has_value());
}
