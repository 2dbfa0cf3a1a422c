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
#include <vector>

#include "pifs/ifs_core.hpp"

using doctest::Approx;
using namespace pifs;

namespace {

SystemSpec cantor() {
    const IntervalDomain X(0.0, 1.0);
    return SystemSpec::finite(X, std::nullopt,
                              {MapSpec::affine(1.0 / 3.0, 0.0), MapSpec::affine(1.0 / 3.0, 2.0 / 3.0)},
                              "cantor");
}

// Parabolic x/(1+x) plus affine maps r_i = (1 - 2^-i) / 3 placed at 0.6.
SystemSpec parabolic_generator() {
    const IntervalDomain X(0.0, 1.0);
    return SystemSpec(
        X, MapSpec::moebius(X),
        [](Symbol i) { return MapSpec::affine((1.0 - std::ldexp(1.0, -int(i))) / 3.0, 0.6); },
        std::nullopt, "parabolic-generator");
}

} // namespace

TEST_CASE("maps: affine, Moebius and user kinds") {
    const IntervalDomain X(0.0, 1.0);
    const auto a = MapSpec::affine(-0.5, 0.75);
    CHECK(a.eval(0.5) == 0.5);
    CHECK(a.image(0.0, 1.0) == std::pair{0.25, 0.75});
    CHECK(a.log_abs_deriv(0.3) == std::log(0.5));

    const auto m = MapSpec::moebius(X);
    for (double x : {0.0, 0.1, 0.5, 1.0}) {
        CHECK(m.eval(x) == Approx(x / (1 + x)).epsilon(1e-15));
        CHECK(m.deriv(x) == Approx(1 / ((1 + x) * (1 + x))).epsilon(1e-15));
        CHECK(m.log_abs_deriv(x) == Approx(-2 * std::log1p(x)).epsilon(1e-15));
    }
    // rescaled to [2, 6]: v = 2 and s(6) = 2 + 4 * 1/2
    const auto m2 = MapSpec::moebius(IntervalDomain(2.0, 6.0));
    CHECK(m2.eval(2.0) == 2.0);
    CHECK(m2.eval(6.0) == 4.0);
    CHECK(m2.log_deriv_lipschitz(IntervalDomain(2.0, 6.0)) == 0.5);

    const auto lg = MapSpec::affine_log(-1000.0, 1.0, 0.25);
    CHECK(lg.rate() == 0.0);
    CHECK(lg.log_abs_deriv(0.5) == -1000.0);

    const auto u = MapSpec::user({[](double x) { return x * x / 2; }, [](double x) { return x; }, 1.0, "x^2/2"});
    CHECK(u.eval(1.0) == 0.5);
    CHECK(u.log_deriv_lipschitz(IntervalDomain(0.5, 1.0)) == Approx(2.0).epsilon(1e-2));
}

TEST_CASE("validate_system: Cantor pair passes as a hyperbolic fixture") {
    const auto rep = validate_system(cantor(), 4096);
    CHECK(rep.passed());
    CHECK(rep.hyperbolic_only);
    CHECK(rep.find("interior_image", 2)->skipped);
    CHECK(rep.find("beta_bracket", 1)->skipped);
    CHECK(rep.find("contraction", 2)->value == Approx(1.0 / 3.0));
}

TEST_CASE("validate_system: x/(1+x) is parabolic with v = 0 and beta = 1") {
    const IntervalDomain X(0.0, 1.0);
    const auto S = SystemSpec::finite(X, MapSpec::moebius(X), {MapSpec::affine(0.25, 0.5)}, "moebius");
    const auto rep = validate_system(S, 4096);
    CHECK(rep.passed());
    REQUIRE(rep.indifferent_point.has_value());
    CHECK(*rep.indifferent_point == 0.0);
    CHECK(*rep.beta_estimate == Approx(1.0).epsilon(1e-3));
    // |s'(x) - 1| / x -> 2, so the bracket needs L1 >= 2
    CHECK(*rep.L1_estimate >= 1.98);
    CHECK(*rep.L1_estimate <= 2.02);
    CHECK(rep.find("derivative_monotone", 1)->passed);
}

TEST_CASE("validate_system: user parabolic map located on the grid") {
    const IntervalDomain X(0.0, 1.0);
    // s(x) = x - x^2 / 4: s'(x) = 1 - x/2, indifferent at 0, beta = 1
    const auto s1 = MapSpec::user({[](double x) { return x - x * x / 4; }, [](double x) { return 1 - x / 2; },
                                   1.0, "x - x^2/4"});
    const auto S = SystemSpec::finite(X, s1, {MapSpec::affine(0.2, 0.7)}, "user");
    const auto rep = validate_system(S, 1024);
    CHECK(rep.passed());
    CHECK(*rep.indifferent_point == Approx(0.0).epsilon(1e-12));
    CHECK(*rep.beta_estimate == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("validate_system: negative controls") {
    const IntervalDomain X(0.0, 1.0);
    // 1.1 x is neither a self-map nor contracting
    const auto S = SystemSpec::finite(X, std::nullopt,
                                      {MapSpec::affine(1.1, 0.0), MapSpec::affine(1.0 / 3.0, 0.0)});
    const auto rep = validate_system(S, 256);
    CHECK_FALSE(rep.passed());
    CHECK_FALSE(rep.find("self_map", 1)->passed);
    CHECK_FALSE(rep.find("contraction", 1)->passed);
    CHECK(rep.find("self_map", 2)->passed);

    // a hyperbolic image containing v violates the interior-image condition
    const auto T = SystemSpec::finite(X, MapSpec::moebius(X), {MapSpec::affine(0.5, 0.0)});
    CHECK_FALSE(validate_system(T, 256).find("interior_image", 2)->passed);

    // non-finite values throw
    const auto bad = MapSpec::user({[](double x) { return std::log(x); }, [](double x) { return 1 / x; },
                                    1.0, "log"});
    const auto B = SystemSpec::finite(X, std::nullopt, {bad, MapSpec::affine(0.5, 0.0)});
    CHECK_THROWS_AS(validate_system(B, 128), EvaluationError);
    CHECK_THROWS_AS(validate_system(cantor(), 32), std::domain_error);
}

TEST_CASE("validate_system is deterministic") {
    const auto S = parabolic_generator();
    const auto a = validate_system(S, 512, 16);
    const auto b = validate_system(S, 512, 16);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t k = 0; k < a.entries.size(); ++k) {
        CHECK(a.entries[k].condition == b.entries[k].condition);
        CHECK(a.entries[k].value == b.entries[k].value);
        CHECK(a.entries[k].passed == b.entries[k].passed);
    }
    CHECK(a.passed());
    CHECK(a.indices_checked == 16);
}

TEST_CASE("truncation_constants: analytic values") {
    const auto tc = truncation_constants(cantor(), 2);
    CHECK(tc.ok);
    CHECK(tc.gamma == 1.0 / 3.0);
    CHECK(tc.u == 1.0 / 3.0);
    CHECK(tc.M == 0.0);
    CHECK(tc.v == 0.0);
    REQUIRE(tc.V.has_value());
    CHECK(tc.V->second == Approx(2.0 / 3.0).epsilon(1e-15));

    const auto S = parabolic_generator();
    const auto t5 = truncation_constants(S, 5);
    CHECK(t5.ok);
    CHECK(t5.gamma == (1.0 - std::ldexp(1.0, -5)) / 3.0);
    CHECK(t5.u == (1.0 - std::ldexp(1.0, -2)) / 3.0);
    CHECK(t5.M == 2.0);
    CHECK(t5.V->second == Approx(0.6).epsilon(1e-15));

    const IntervalDomain X(0.0, 1.0);
    const auto touching = SystemSpec::finite(X, MapSpec::moebius(X), {MapSpec::affine(0.5, 0.0)});
    const auto bad = truncation_constants(touching, 2);
    CHECK_FALSE(bad.ok);
    CHECK_FALSE(bad.V.has_value());

    const auto flat = MapSpec::user({[](double x) { return 0.5 * x * x; }, [](double x) { return x; }, 1.0, "x^2/2"});
    const auto vanishing = SystemSpec::finite(X, std::nullopt, {flat, MapSpec::affine(0.3, 0.7)});
    const auto v0 = truncation_constants(vanishing, 2, 256);
    CHECK_FALSE(v0.ok);
    CHECK(v0.u == 0.0);
}

TEST_CASE("property: truncation constants are monotone in n") {
    const auto S = parabolic_generator();
    auto prev = truncation_constants(S, 2, 256);
    for (Symbol n = 3; n <= 24; ++n) {
        const auto cur = truncation_constants(S, n, 256);
        CHECK(cur.gamma >= prev.gamma);
        CHECK(cur.u <= prev.u);
        CHECK(cur.M >= prev.M);
        prev = cur;
    }
}

TEST_CASE("property: user-map truncation constants approach the analytic ones") {
    const IntervalDomain X(0.0, 1.0);
    const auto s1 = MapSpec::user({[](double x) { return x / (1 + x); },
                                   [](double x) { return 1 / ((1 + x) * (1 + x)); }, 1.0, "x/(1+x)"});
    const auto S = SystemSpec::finite(X, s1, {MapSpec::affine(0.25, 0.5)});
    const auto tc = truncation_constants(S, 2, 4096);
    CHECK(tc.v == Approx(0.0).epsilon(1e-12));
    CHECK(tc.u == Approx(0.25).epsilon(1e-12));
    CHECK(tc.M == Approx(2.0).epsilon(1e-3));
}

TEST_CASE("families: evaluation, truncation and parabolic invariance") {
    const IntervalDomain X(0.0, 1.5);
    const FamilySpec F(
        X, ParamBox{{{0.4, 0.9}}}, std::nullopt,
        [](std::span<const double> t, Symbol i) {
            return i == 1 ? MapSpec::affine(1.0 / 3.0, 0.0) : MapSpec::affine(1.0 / 3.0, t[0] * double(i - 1));
        },
        std::nullopt, "translation");
    const std::vector<double> t = {0.5};
    CHECK(F.at(t).map(2).offset() == 0.5);
    CHECK(F.at(t).map(3).offset() == 1.0);
    CHECK(F.param_domain().volume() == Approx(0.5));

    const auto T5 = truncate(F, 5);
    CHECK(T5.max_index() == 5u);
    CHECK(truncate(truncate(F, 7), 5).max_index() == T5.max_index());
    CHECK_THROWS_AS(T5.generator(t, 6), std::domain_error);
    for (double s : {0.4, 0.55, 0.9}) {
        const std::vector<double> ts = {s};
        for (Symbol i = 1; i <= 5; ++i) {
            CHECK(T5.generator(ts, i).offset() == F.generator(ts, i).offset());
            CHECK(truncate(T5, 3).at(ts).max_index() == 3u);
        }
    }
    CHECK_THROWS_AS(F.at(std::vector<double>{0.1, 0.2}), std::domain_error);

    const IntervalDomain Y(0.0, 1.0);
    const FamilySpec G(Y, ParamBox{{{0.0, 1.0}}}, MapSpec::moebius(Y),
                       [](std::span<const double> t, Symbol) { return MapSpec::affine(0.2, 0.5 + 0.1 * t[0]); },
                       4, "g");
    const std::vector<double> t0 = {0.0}, t1 = {1.0};
    CHECK(G.at(t0).map(1).eval(0.5) == G.at(t1).map(1).eval(0.5));
}
