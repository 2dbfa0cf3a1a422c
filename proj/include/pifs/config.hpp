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
#include <stdexcept>
#include <string>
#include <vector>

#include "pifs/exponents.hpp"
#include "pifs/expr.hpp"
#include "pifs/ifs_core.hpp"
#include "pifs/projection.hpp"
#include "pifs/symbolic_measures.hpp"

namespace pifs {

/// Schema violation anchored at a 1-based line of the config source.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& key, const std::string& message);
    std::size_t line() const { return line_; }
    const std::string& key() const { return key_; }
    const std::string& message() const { return message_; }

private:
    std::size_t line_;
    std::string key_;
    std::string message_;
};

enum class RunKind { Validate, Dimension, Sweep, Attractor, Transversality, Report };

std::string to_string(RunKind k);
std::optional<RunKind> parse_run_kind(const std::string& name);

/// One map declaration: affine through rate or log_rate, or a user map
/// through eval and deriv expressions in x.
struct MapDecl {
    enum class Form { Affine, LogAffine, User };
    Form form = Form::Affine;
    Expr rate;
    Expr log_rate;
    Expr sign;
    Expr offset;
    Expr eval;
    Expr deriv;
    double theta = 1.0;
    std::size_t line = 0;
};

struct AttractorConfig {
    std::size_t points = 100'000;
    double tol = 1e-9;
    std::size_t bins = 64;
    std::size_t depth_cap = kDefaultDepthCap;
    /// Box-count scales; empty selects them automatically.
    std::vector<double> scales;
    /// Local-dimension radii; empty reuses the scales.
    std::vector<double> radii;
    std::size_t max_centers = 4096;
    bool write_cloud = true;
};

struct TransversalityConfig {
    bool present = false;
    std::size_t pairs = 64;
    std::vector<double> r_list;
    std::vector<std::size_t> grid;
    double tol = 1e-10;
    Symbol adversarial_symbols = 4;
};

struct ExperimentConfig {
    std::string name;
    RunKind kind = RunKind::Dimension;
    std::uint64_t seed = 0;

    double domain_a = 0.0;
    double domain_b = 1.0;

    /// "none", "moebius" or "user".
    std::string parabolic = "none";
    std::optional<MapDecl> parabolic_map;
    std::vector<MapDecl> maps;
    std::optional<MapDecl> generator;
    std::optional<Symbol> max_index;
    std::optional<double> uniform_u;

    /// False when no parameter box was declared; box is then [0, 1].
    bool parametrized = false;
    ParamBox box;
    std::vector<double> t;
    std::vector<std::size_t> grid;
    std::size_t max_points = 10'000;

    std::vector<double> head;
    TailModel tail;
    std::string measure_id;

    std::vector<Symbol> n_list;
    double convergence_tol = 1e-3;
    LyapunovBudgets budgets;

    AttractorConfig attractor;
    TransversalityConfig transversality;
    std::optional<double> alpha;

    std::size_t validation_grid = 4096;
    std::size_t validation_indices = 64;

    std::string output_dir;

    /// FNV-1a 64 hash of the raw config text.
    std::uint64_t config_hash = 0;
    std::string origin;
};

ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Checks the requirements of a particular run kind, such as a sweep grid
/// within the point cap. Throws ConfigError.
void check_run_requirements(const ExperimentConfig& cfg, RunKind kind);

FamilySpec build_family(const ExperimentConfig& cfg);
BernoulliSpec build_measure(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

} // namespace pifs
