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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pifs/config.hpp"
#include "pifs/experiment.hpp"

using doctest::Approx;
using namespace pifs;
namespace fs = std::filesystem;

namespace {

const char* kCantor = R"(experiment:
  name: cantor_test
  kind: dimension
  seed: 1
domain: [0, 1]
system:
  maps:
    - {rate: 1/3, offset: 0}
    - {rate: 1/3, offset: 2/3}
measure:
  uniform: 2
dimension:
  n_list: [2, 3, 4]
)";

const char* kSweep = R"(experiment:
  name: sweep_test
  kind: sweep
  seed: 2
domain: [0, 1]
system:
  maps:
    - {rate: t1, offset: 0}
    - {rate: t1, offset: 1 - t1}
parameters:
  box: [[0.175, 0.625]]
  grid: [9]
  max_points: 20
measure:
  uniform: 2
dimension:
  n_list: [2, 3, 4]
exceptional:
  alpha: 0.5
)";

std::size_t error_line(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return 0;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto p = s.find(from);
    REQUIRE(p != std::string::npos);
    return s.replace(p, from.size(), to);
}

fs::path temp_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("pifs_test_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::string> csv_column(const std::string& csv, std::size_t col) {
    std::istringstream is(csv);
    std::string line;
    std::vector<std::string> out;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string cell;
        for (std::size_t k = 0; k <= col; ++k) std::getline(ls, cell, ',');
        out.push_back(cell);
    }
    return out;
}

} // namespace

TEST_CASE("parse_config reads the cantor fixture") {
    const auto cfg = parse_config(kCantor);
    CHECK(cfg.name == "cantor_test");
    CHECK(cfg.kind == RunKind::Dimension);
    CHECK(cfg.seed == 1);
    CHECK(cfg.maps.size() == 2);
    CHECK(cfg.max_index == Symbol(2));
    CHECK_FALSE(cfg.parametrized);
    CHECK(cfg.n_list == std::vector<Symbol>{2, 3, 4});
    const auto S = build_family(cfg).at(cfg.t);
    CHECK(S.map(2).offset() == Approx(2.0 / 3.0));
    CHECK(build_measure(cfg).prob(1) == 0.5);
    CHECK(cfg.config_hash == fnv1a64(kCantor));
}

TEST_CASE("schema errors carry line numbers") {
    const std::string base = kCantor;
    // missing measure anchors at the root mapping
    CHECK(error_line(replace(base, "measure:\n  uniform: 2\n", "")) == 1);
    CHECK(error_line(replace(base, "kind: dimension", "kind: nonsense")) == 3);
    CHECK(error_line(replace(base, "rate: 1/3, offset: 0}", "rate: 1/3, ofset: 0}")) == 8);
    CHECK(error_line(replace(base, "rate: 1/3, offset: 2/3", "rate: 1/3 +, offset: 2/3")) == 9);
    CHECK(error_line(replace(base, "rate: 1/3, offset: 0", "rate: x/3, offset: 0")) == 8);
    CHECK(error_line(replace(base, "rate: 1/3, offset: 0", "rate: t1, offset: 0")) == 8);
    CHECK(error_line(replace(base, "uniform: 2", "head: [0.5, 0.6]")) == 11);
    CHECK(error_line(replace(base, "n_list: [2, 3, 4]", "n_list: [2, 4, 3]")) == 13);
    CHECK(error_line(replace(base, "domain: [0, 1]", "domain: [1, 0]")) == 5);
    CHECK(error_line(base + "extra: 1\n") == 14);
    CHECK(error_line("experiment: [unclosed\n") >= 1);
}

TEST_CASE("measure declarations") {
    const std::string base = kCantor;
    auto cfg = parse_config(replace(base, "uniform: 2", "geometric: 0.5"));
    CHECK(build_measure(cfg).prob(3) == 0.125);
    cfg = parse_config(replace(base, "uniform: 2", "head: [0.5]\n  tail: {kind: geometric, ratio: 0.5}"));
    CHECK(build_measure(cfg).prob(2) == Approx(0.25));
    cfg = parse_config(replace(base, "uniform: 2", "tail: {kind: log_power}"));
    CHECK(build_measure(cfg).entropy().is_infinite());
    cfg = parse_config(replace(base, "uniform: 2", "dirac: 2"));
    CHECK(build_measure(cfg).prob(2) == 1.0);
    CHECK(error_line(replace(base, "uniform: 2", "tail: {kind: zipf}")) == 11);
}

TEST_CASE("run requirements") {
    auto cfg = parse_config(kSweep);
    CHECK_NOTHROW(check_run_requirements(cfg, RunKind::Sweep));
    cfg.grid = {21};
    try {
        check_run_requirements(cfg, RunKind::Sweep);
        FAIL("grid cap not enforced");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("grid cap exceeded") != std::string::npos);
    }
    const auto c = parse_config(kCantor);
    CHECK_THROWS_AS(check_run_requirements(c, RunKind::Sweep), ConfigError);
    CHECK_THROWS_AS(check_run_requirements(c, RunKind::Transversality), ConfigError);
    auto few = c;
    few.n_list = {2, 3};
    CHECK_THROWS_AS(check_run_requirements(few, RunKind::Dimension), ConfigError);
}

TEST_CASE("dimension run writes artifacts and reports the formula") {
    const auto dir = temp_dir("dim");
    RunOptions opt;
    opt.out_dir = dir.string();
    const auto res = run_experiment(parse_config(kCantor), opt);
    CHECK(res.exit_code == 0);
    CHECK(res.summary.find("dimension: 0.630930") != std::string::npos);
    for (const char* f : {"manifest.json", "summary.txt", "profile.csv", "lyapunov.csv", "validation.csv"})
        CHECK(fs::exists(dir / "cantor_test" / f));
    std::ifstream in(dir / "cantor_test" / "profile.csv", std::ios::binary);
    std::string body((std::istreambuf_iterator<char>(in)), {});
    CHECK(body.find('\r') == std::string::npos);
    CHECK(body.find("\nn,h,lambda_mean,lambda_stderr") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("reruns and worker counts give identical bytes") {
    const auto cfg = parse_config(kSweep);
    RunOptions a, b;
    a.out_dir = temp_dir("a").string();
    b.out_dir = temp_dir("b").string();
    a.jobs = 1;
    b.jobs = 5;
    auto base = cfg;
    base.max_points = 100;
    const auto ra = run_experiment(base, a);
    const auto rb = run_experiment(base, b);
    REQUIRE(ra.exit_code == 0);
    CHECK(ra.artifacts == rb.artifacts);
    std::ifstream ma(fs::path(*a.out_dir) / "sweep_test" / "manifest.json");
    std::ifstream mb(fs::path(*b.out_dir) / "sweep_test" / "manifest.json");
    std::string sa((std::istreambuf_iterator<char>(ma)), {}), sb((std::istreambuf_iterator<char>(mb)), {});
    CHECK(sa == sb);
    CHECK(sa.find("jobs") == std::string::npos);
    fs::remove_all(*a.out_dir);
    fs::remove_all(*b.out_dir);
}

TEST_CASE("sweep crosses into the absolutely continuous region near rate 1/2") {
    auto cfg = parse_config(kSweep);
    cfg.max_points = 100;
    RunOptions opt;
    opt.out_dir = temp_dir("cross").string();
    const auto res = run_experiment(cfg, opt);
    REQUIRE(res.exit_code == 0);
    const auto& csv = res.artifacts.at("sweep.csv");
    const auto t = csv_column(csv, 0);
    const auto verdict = csv_column(csv, 3);
    REQUIRE(t.size() == 10);
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double r = std::stod(t[k]);
        if (r < 0.49) CHECK(verdict[k] == "Subcritical");
        if (r > 0.51) CHECK(verdict[k] == "AbsolutelyContinuousRegion");
    }
    CHECK(res.artifacts.count("exceptional.csv") == 1);
    fs::remove_all(*opt.out_dir);
}

TEST_CASE("constant-in-t sweep rows agree") {
    auto text = replace(replace(kSweep, "rate: t1, offset: 0", "rate: 0.3, offset: 0"), "rate: t1, offset: 1 - t1",
                        "rate: 0.3, offset: 0.7");
    auto cfg = parse_config(text);
    cfg.max_points = 100;
    RunOptions opt;
    opt.out_dir = temp_dir("const").string();
    const auto res = run_experiment(cfg, opt);
    REQUIRE(res.exit_code == 0);
    const auto& csv = res.artifacts.at("sweep.csv");
    for (std::size_t col = 1; col < 8; ++col) {
        const auto v = csv_column(csv, col);
        for (std::size_t k = 2; k < v.size(); ++k) CHECK(v[k] == v[1]);
    }
    fs::remove_all(*opt.out_dir);
}

TEST_CASE("compute failures exit 1 with the stage name") {
    // overlapping images that leave X fail validation
    auto text = replace(kCantor, "rate: 1/3, offset: 2/3", "rate: 1/3, offset: 0.9");
    RunOptions opt;
    opt.out_dir = temp_dir("fail").string();
    const auto res = run_experiment(parse_config(text), opt);
    CHECK(res.exit_code == 1);
    CHECK(res.stage == "validate");
    CHECK(fs::exists(fs::path(*opt.out_dir) / "cantor_test" / "manifest.json"));
    fs::remove_all(*opt.out_dir);
}

TEST_CASE("output directory resolution") {
    const auto cfg = parse_config(kCantor);
    RunOptions opt;
    opt.out_dir = "/x";
    CHECK(resolve_output_base(cfg, opt) == fs::path("/x"));
    auto c2 = cfg;
    c2.output_dir = "/y";
    CHECK(resolve_output_base(c2, RunOptions{}) == fs::path("/y"));
}
