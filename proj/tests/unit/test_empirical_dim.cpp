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
#include <sstream>

#include "pifs/empirical_dim.hpp"

using doctest::Approx;
using namespace pifs;

namespace {

const IntervalDomain kUnit(0.0, 1.0);
const double kCantorDim = std::log(2.0) / std::log(3.0);

SystemSpec cantor() {
    return SystemSpec::finite(kUnit, std::nullopt,
                              {MapSpec::affine(1.0 / 3.0, 0.0), MapSpec::affine(1.0 / 3.0, 2.0 / 3.0)}, "cantor");
}

SystemSpec halves() {
    return SystemSpec::finite(kUnit, std::nullopt, {MapSpec::affine(0.5, 0.0), MapSpec::affine(0.5, 0.5)}, "halves");
}

SystemSpec quarters() {
    return SystemSpec::finite(
        kUnit, std::nullopt,
        {MapSpec::affine(0.25, 0.0), MapSpec::affine(0.25, 0.375), MapSpec::affine(0.25, 0.75)}, "quarters");
}

PointCloud constant_cloud(double x, std::size_t n) {
    PointCloud c;
    c.points.assign(n, CloudPoint{x, 1.0 / static_cast<double>(n), 0.0});
    return c;
}

std::vector<double> geometric(double r0, double q, int k0, int k1) {
    std::vector<double> out;
    for (int k = k0; k <= k1; ++k) out.push_back(r0 * std::pow(q, k));
    return out;
}

const PointCloud& cantor_cloud() {
    static const PointCloud c = sample_attractor(cantor(), BernoulliSpec::uniform(2), 1'000'000, 1e-9, 11, 4);
    return c;
}

} // namespace

TEST_CASE("box_count examples") {
    const auto one = box_count(constant_cloud(0.3, 10), kUnit, geometric(1.0, 0.5, 1, 12));
    for (const auto& [r, n] : one) CHECK(n == 1);

    const auto uni = sample_attractor(halves(), BernoulliSpec::uniform(2), 1'000'000, 1e-9, 3, 4);
    const auto bu = box_count(uni, kUnit, geometric(1.0, 0.5, 1, 10));
    for (std::size_t k = 0; k < bu.size(); ++k) CHECK(bu[k].second == (std::size_t{1} << (k + 1)));

    const auto bc = box_count(cantor_cloud(), kUnit, geometric(1.0, 1.0 / 3.0, 1, 8));
    for (std::size_t k = 0; k < bc.size(); ++k) {
        const double expect = std::pow(2.0, double(k + 1));
        CHECK(std::abs(double(bc[k].second) - expect) <= 0.02 * expect);
    }
}

TEST_CASE("box_count preconditions") {
    auto c = constant_cloud(0.5, 4);
    CHECK_THROWS_AS(box_count(c, kUnit, {0.1, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(box_count(c, kUnit, {0.1, -0.05}), std::invalid_argument);
    c.points[0].err = 1e-3;
    CHECK_THROWS_AS(box_count(c, kUnit, {0.1, 0.01}), ResolutionError);
    CHECK_NOTHROW(box_count(c, kUnit, {0.1, 0.02}));
    // right endpoint is folded into the last cell
    const auto e = box_count(constant_cloud(1.0, 3), kUnit, {0.5, 0.25});
    CHECK(e[0].second == 1);
}

TEST_CASE("property: box_count is monotone on nested grids") {
    const auto& c = cantor_cloud();
    for (double q : {0.5, 1.0 / 3.0, 0.25}) {
        const auto b = box_count(c, kUnit, geometric(1.0, q, 1, 6));
        for (std::size_t k = 1; k < b.size(); ++k) CHECK(b[k].second >= b[k - 1].second);
    }
}

TEST_CASE("fit_dimension examples") {
    ScalePairs cantor_pairs, dyadic, flat;
    for (int k = 1; k <= 8; ++k) {
        cantor_pairs.emplace_back(std::pow(3.0, -k), std::pow(2.0, k));
        dyadic.emplace_back(std::pow(2.0, -k), std::pow(2.0, k));
        flat.emplace_back(std::pow(2.0, -k), 1.0);
    }
    const auto f = fit_dimension(cantor_pairs);
    CHECK(std::abs(f.slope - kCantorDim) < 1e-12);
    CHECK(f.r_squared == Approx(1.0));
    CHECK(f.r_min == Approx(std::pow(3.0, -8)));
    CHECK(fit_dimension(dyadic).slope == Approx(1.0).epsilon(1e-13));
    const auto z = fit_dimension(flat);
    CHECK(z.slope == 0.0);
    CHECK(z.degenerate);
    CHECK(z.r_squared >= 0.0);
    CHECK(z.r_squared <= 1.0);
    CHECK_THROWS_AS(fit_dimension(ScalePairs(cantor_pairs.begin(), cantor_pairs.begin() + 3)),
                    std::invalid_argument);
    auto bad = dyadic;
    bad[2].second = 0.0;
    CHECK_THROWS_AS(fit_dimension(bad), std::invalid_argument);
}

TEST_CASE("local_dim_measure examples") {
    const auto radii = geometric(0.1, 0.5, 0, 6);
    const auto uni = sample_attractor(halves(), BernoulliSpec::uniform(2), 200'000, 1e-9, 5, 4);
    CHECK(local_dim_measure(uni, radii).slope == Approx(1.0).epsilon(0.05));

    const auto cr = geometric(0.1, 1.0 / 3.0, 0, 5);
    const auto lc = local_dim_measure(cantor_cloud(), cr);
    CHECK(std::abs(lc.slope - kCantorDim) <= 0.05);

    const auto dirac = local_dim_measure(constant_cloud(0.25, 10'000), radii);
    CHECK(dirac.slope == 0.0);
    CHECK(dirac.degenerate);

    CHECK_THROWS_AS(local_dim_measure(constant_cloud(0.25, 100), radii), std::invalid_argument);
}

TEST_CASE("local_dim_measure drops sparse scales") {
    // Two far-apart atoms: tiny windows around an atom still hold the atom's twins,
    // so split every atom to distinct points to force empty windows.
    PointCloud c;
    const std::size_t n = 10'000;
    for (std::size_t k = 0; k < n; ++k)
        c.points.push_back({static_cast<double>(k) / n, 1.0 / n, 0.0});
    const auto f = local_dim_measure(c, {0.1, 0.05, 0.02, 0.01, 0.001, 1e-6});
    CHECK(f.pairs.size() == 5);
    CHECK(f.warnings.size() == 1);
    CHECK(f.slope == Approx(1.0).epsilon(0.05));
}

TEST_CASE("property: estimates are invariant under affine rescaling") {
    const auto& c = cantor_cloud();
    PointCloud s = c;
    for (auto& p : s.points) p.x = 2.0 + 3.0 * p.x;
    const IntervalDomain Y(2.0, 5.0);
    const auto r = geometric(1.0, 1.0 / 3.0, 2, 7);
    std::vector<double> r3;
    for (double v : r) r3.push_back(3.0 * v);
    const auto a = fit_dimension([&] {
        ScalePairs p;
        for (auto [rr, n] : box_count(c, kUnit, r)) p.emplace_back(rr, double(n));
        return p;
    }());
    const auto b = fit_dimension([&] {
        ScalePairs p;
        for (auto [rr, n] : box_count(s, Y, r3)) p.emplace_back(rr, double(n));
        return p;
    }());
    CHECK(a.slope == Approx(b.slope).epsilon(1e-3));
    CHECK(local_dim_measure(c, r).slope == Approx(local_dim_measure(s, r3).slope).epsilon(1e-3));
}

TEST_CASE("agreement with the formula on open-set fixtures") {
    const auto q = sample_attractor(quarters(), BernoulliSpec::uniform(3), 300'000, 1e-9, 9, 4);
    ScalePairs p;
    for (auto [r, n] : box_count(q, kUnit, geometric(1.0, 0.25, 1, 7))) p.emplace_back(r, double(n));
    const double D = std::log(3.0) / std::log(4.0);
    CHECK(std::abs(fit_dimension(p).slope - D) <= 0.05);
    CHECK(std::abs(local_dim_measure(q, geometric(0.1, 0.25, 0, 4)).slope - D) <= 0.05);
}

TEST_CASE("auto_scales and fit CSV") {
    auto c = constant_cloud(0.5, 10);
    c.points[0].err = 1e-4;
    const auto s = auto_scales(c, kUnit);
    CHECK(s.front() == 1.0 / 16.0);
    CHECK(s.back() > 1e-3);
    CHECK(s.size() == 6);
    c.points[0].err = 1e-3;
    CHECK_THROWS_AS(auto_scales(c, kUnit), ResolutionError);

    ScalePairs p = {{0.5, 2}, {0.25, 4}, {0.125, 8}, {0.0625, 16}};
    std::ostringstream os;
    write_fit_csv(os, fit_dimension(p), "count");
    CHECK(os.str().find("# slope=1 ") == 0);
    CHECK(os.str().find("r,count\n0.5,2\n") != std::string::npos);
}
