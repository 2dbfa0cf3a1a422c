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

#include "pifs/exponents.hpp"

using doctest::Approx;
using namespace pifs;

namespace {

const IntervalDomain kUnit(0.0, 1.0);
const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);

SystemSpec cantor() {
    return SystemSpec::finite(kUnit, std::nullopt,
                              {MapSpec::affine(1.0 / 3.0, 0.0), MapSpec::affine(1.0 / 3.0, 2.0 / 3.0)},
                              "cantor");
}

// r_i = 3^-i, placed inside [0, 1].
SystemSpec power_rates() {
    return SystemSpec(kUnit, std::nullopt,
                      [](Symbol i) { return MapSpec::affine(std::pow(3.0, -double(i)), 0.5); },
                      std::nullopt, "power-rates");
}

// Parabolic x/(1+x) with affine maps of rates (1 - 2^-i)/4 at 0.6.
SystemSpec geometric_fixture() {
    return SystemSpec(
        kUnit, MapSpec::moebius(kUnit),
        [](Symbol i) { return MapSpec::affine(0.25 * (1.0 - std::ldexp(1.0, -int(i))), 0.6); },
        std::nullopt, "geometric-fixture");
}

LyapunovBudgets small_budgets() {
    LyapunovBudgets b;
    b.per_symbol = 20000;
    b.samples = 20000;
    return b;
}

} // namespace

TEST_CASE("lyapunov_mc examples") {
    const auto c = lyapunov_mc(cantor(), BernoulliSpec::uniform(2), 1000, 1e-10, 1);
    CHECK(c.mean == Approx(kLog3).epsilon(1e-15));
    CHECK(c.std_error == 0.0);
    CHECK(c.bias_bound == 0.0);

    const auto S2 = SystemSpec::finite(kUnit, std::nullopt, {MapSpec::affine(0.5, 0.0), MapSpec::affine(0.25, 0.75)});
    const auto e = lyapunov_mc(S2, BernoulliSpec::uniform(2), 100000, 1e-10, 2);
    CHECK(std::abs(e.mean - 1.5 * kLog2) <= 3 * e.std_error);
    CHECK(e.std_error > 0.0);

    const auto d = lyapunov_mc(S2, BernoulliSpec::dirac(2), 500, 1e-10, 3);
    CHECK(d.mean == -std::log(0.25));
    CHECK(d.std_error == 0.0);

    CHECK_THROWS_AS(lyapunov_mc(S2, BernoulliSpec::uniform(2), 99, 1e-10, 1), std::domain_error);
}

TEST_CASE("lyapunov_mc: vanishing derivative is outside scope") {
    const auto flat = MapSpec::user({[](double x) { return 0.5 * x * x; }, [](double x) { return x; }, 1.0, "x^2/2"});
    const auto S = SystemSpec::finite(kUnit, std::nullopt, {flat, MapSpec::affine(0.5, 0.5)});
    CHECK_THROWS_AS(lyapunov_mc(S, BernoulliSpec::dirac(1), 100, 1e-10, 1), std::domain_error);
}

TEST_CASE("lyapunov_mc is independent of the worker count") {
    const auto S = geometric_fixture();
    const auto mu = BernoulliSpec::geometric(0.5);
    const auto a = lyapunov_mc(S, mu, 5000, 1e-10, 77, 1);
    const auto b = lyapunov_mc(S, mu, 5000, 1e-10, 77, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.bias_bound == b.bias_bound);
}

TEST_CASE("lyapunov_series: closed-form series and divergence") {
    LyapunovBudgets b;
    const auto e = lyapunov_series(power_rates(), BernoulliSpec::geometric(0.5), b, 1);
    CHECK_FALSE(e.diverged);
    CHECK(e.mean == Approx(2 * kLog3).epsilon(1e-12));
    CHECK(e.std_error == 0.0);
    CHECK(e.bias_bound < 1e-12);
    CHECK(e.verdict_path.find("ratio-test") != std::string::npos);

    // r_i = exp(-2^i): each term p_i * 2^i = 1
    const SystemSpec exploding(kUnit, std::nullopt,
                               [](Symbol i) { return MapSpec::affine_log(-std::ldexp(1.0, int(i)), 1.0, 0.5); },
                               std::nullopt, "exploding");
    const auto d = lyapunov_series(exploding, BernoulliSpec::geometric(0.5), b, 1);
    CHECK(d.diverged);
    CHECK(d.mean > b.divergence_cap);
}

TEST_CASE("lyapunov_series: finite support agrees with MC") {
    const auto S = geometric_fixture();
    const auto mu = BernoulliSpec({0.5, 0.3, 0.2});
    const auto b = small_budgets();
    const auto series = lyapunov_series(S, mu, b, 10);
    const auto mc = lyapunov_mc(S, mu, 100000, 1e-10, 11);
    CHECK(series.verdict_path == "series: finite support");
    CHECK(series.std_error > 0.0);
    CHECK(std::abs(series.mean - mc.mean) <= 3 * (series.uncertainty() + mc.uncertainty()));
}

TEST_CASE("lyapunov_series: refuses without a tail bound, accepts a declared uniform u") {
    // non-affine hyperbolic maps with |s'| in [0.3, 0.4]
    auto gen = [](Symbol i) {
        const double c = 0.5 * (1.0 - 1.0 / double(i + 1));
        return MapSpec::user({[c](double x) { return c + 0.3 * x + 0.05 * x * x; },
                              [](double x) { return 0.3 + 0.1 * x; }, 1.0, "quadratic"});
    };
    SystemSpec S(kUnit, std::nullopt, gen, std::nullopt, "quadratic");
    LyapunovBudgets b;
    b.per_symbol = 200;
    b.max_terms = 30;
    CHECK_THROWS_AS(lyapunov_series(S, BernoulliSpec::geometric(0.5), b, 1), EstimatorRefused);

    S.declared_uniform_u = 0.3;
    b.max_terms = 200;
    const auto e = lyapunov_series(S, BernoulliSpec::geometric(0.5), b, 1);
    CHECK(e.verdict_path == "series: uniform-u remainder bound");
    CHECK(e.mean > -std::log(0.4));
    CHECK(e.mean < -std::log(0.3));
}

TEST_CASE("lyapunov_birkhoff examples") {
    const auto c = lyapunov_birkhoff(cantor(), BernoulliSpec::uniform(2), 10000, 100, 5);
    CHECK(c.mean == Approx(kLog3).epsilon(1e-15));
    CHECK(c.std_error == 0.0);

    // Dirac on the parabolic symbol: x_k = x_0 / (1 + k x_0) sinks to v = 0.
    const auto S = geometric_fixture();
    double prev = 1e300;
    for (std::size_t n : {100, 1000, 10000, 100000}) {
        const auto e = lyapunov_birkhoff(S, BernoulliSpec::dirac(1), n, 0, 1);
        double oracle = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            const double x = 0.5 / (1.0 + double(k - 1) * 0.5);
            oracle += 2.0 * std::log1p(x);
        }
        oracle /= double(n);
        CHECK(e.mean == Approx(oracle).epsilon(1e-9));
        CHECK(e.mean < prev);
        prev = e.mean;
    }
    CHECK(prev < 3e-4);
    CHECK_THROWS_AS(lyapunov_birkhoff(S, BernoulliSpec::dirac(1), 10, 10, 1), std::domain_error);
}

TEST_CASE("estimators agree on the geometric fixture") {
    const auto S = geometric_fixture();
    const auto mu = BernoulliSpec::geometric(0.5);
    const auto mc = lyapunov_mc(S, mu, 100000, 1e-10, 21);
    const auto bk = lyapunov_birkhoff(S, mu, 400000, 1000, 22);
    CHECK(std::abs(bk.mean - mc.mean) <= 3 * (bk.std_error + mc.std_error));

    LyapunovBudgets b = small_budgets();
    SystemSpec declared = S;
    declared.declared_uniform_u = 0.125;
    const auto se = lyapunov_series(declared, mu, b, 23);
    CHECK(std::abs(se.mean - mc.mean) <= 3 * (se.uncertainty() + mc.uncertainty()));
    CHECK(mc.mean > 0.0);
}

TEST_CASE("lyapunov_limit_check examples") {
    const FamilySpec constant(
        kUnit, ParamBox{{{0.0, 1.0}}}, std::nullopt,
        [](std::span<const double>, Symbol) { return MapSpec::affine(1.0 / 3.0, 0.0); }, std::nullopt, "const");
    const std::vector<double> t = {0.5};
    const std::vector<Symbol> ns = {2, 4, 8, 16};
    LyapunovBudgets b;
    const auto rep = lyapunov_limit_check(constant, BernoulliSpec::geometric(0.5), t, ns, b, 1);
    for (const auto& [n, e] : rep.entries) CHECK(e.mean == Approx(kLog3).epsilon(1e-15));
    CHECK(rep.max_gap_last3 < 1e-15);

    const auto F = FamilySpec::constant(power_rates(), ParamBox{{{0.0, 1.0}}});
    const std::vector<Symbol> ns2 = {2, 3, 5, 10, 20, 40, 60};
    const auto r2 = lyapunov_limit_check(F, BernoulliSpec::geometric(0.5), t, ns2, b, 1);
    CHECK(r2.entries.front().second.mean == Approx(1.5 * kLog3).epsilon(1e-14));
    for (std::size_t k = 1; k < r2.entries.size(); ++k)
        CHECK(r2.entries[k].second.mean >= r2.entries[k - 1].second.mean);
    CHECK(std::abs(r2.entries.back().second.mean - 2 * kLog3) < 1e-12);

    const std::vector<Symbol> bad = {4, 2, 8};
    CHECK_THROWS_AS(lyapunov_limit_check(F, BernoulliSpec::geometric(0.5), t, bad, b, 1), std::domain_error);
}
