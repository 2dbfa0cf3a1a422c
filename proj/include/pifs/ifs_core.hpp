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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pifs/expr.hpp"
#include "pifs/symbolic_measures.hpp"

namespace pifs {

/// Closed interval X = [a, b].
struct IntervalDomain {
    double a = 0.0;
    double b = 1.0;

    IntervalDomain() = default;
    IntervalDomain(double lo, double hi);
    double width() const { return b - a; }
    bool contains(double x) const { return a <= x && x <= b; }
};

/// Raised when a map produces a non-finite value or derivative.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A C^{1+theta} monotone self-map of an interval.
class MapSpec {
public:
    enum class Kind { Affine, MoebiusParabolic, User };

    struct UserFunctions {
        std::function<double(double)> eval;
        std::function<double(double)> deriv;
        double theta = 1.0;
        std::string label;
    };

    /// s(x) = rate * x + offset.
    static MapSpec affine(double rate, double offset);
    /// Affine map whose rate is known through log|rate|, exact even when the
    /// rate itself underflows.
    static MapSpec affine_log(double log_abs_rate, double sign, double offset);
    /// x -> a + L y / (1 + y) with y = (x - a) / L and L = b - a; indifferent
    /// fixed point at a.
    static MapSpec moebius(const IntervalDomain& X);
    static MapSpec user(UserFunctions f);

    Kind kind() const { return kind_; }
    double eval(double x) const;
    double deriv(double x) const;
    /// log|s'(x)|; exact for affine maps even when |s'| underflows.
    double log_abs_deriv(double x) const;
    /// Image of [lo, hi] (endpoint images, sorted).
    std::pair<double, double> image(double lo, double hi) const;

    double theta() const { return theta_; }
    /// Affine parameters (rate may be 0 after underflow; see log_abs_rate).
    double rate() const { return rate_; }
    double offset() const { return offset_; }
    double log_abs_rate() const { return log_abs_rate_; }
    /// Lipschitz constant of log|s'| on X: exact for affine and Moebius maps,
    /// a 129-point finite-difference estimate for user maps.
    double log_deriv_lipschitz(const IntervalDomain& X) const;
    std::string describe() const;

private:
    Kind kind_ = Kind::Affine;
    double rate_ = 0.0;
    double offset_ = 0.0;
    double log_abs_rate_ = 0.0;
    double origin_ = 0.0;  // Moebius: a
    double scale_ = 1.0;   // Moebius: L
    double theta_ = 1.0;
    std::shared_ptr<const UserFunctions> user_;
};

/// A countable system S = {s_i}. When a parabolic map is given it is s_1 and
/// the generator supplies s_i for i >= 2; without one the system is purely
/// hyperbolic and the generator supplies every index from 1.
class SystemSpec {
public:
    using Generator = std::function<MapSpec(Symbol)>;
    static constexpr Symbol kCacheSize = 256;

    SystemSpec(IntervalDomain X, std::optional<MapSpec> parabolic, Generator generator,
               std::optional<Symbol> max_index, std::string id = "system");
    static SystemSpec finite(IntervalDomain X, std::optional<MapSpec> parabolic,
                             std::vector<MapSpec> maps, std::string id = "system");

    const IntervalDomain& domain() const { return domain_; }
    bool hyperbolic_only() const { return !parabolic_.has_value(); }
    std::optional<Symbol> max_index() const { return max_index_; }
    const std::string& id() const { return id_; }
    /// Hoelder exponent of the system: the parabolic map's theta, or 1.
    double theta() const;

    /// s_i for 1 <= i <= max_index.
    MapSpec map(Symbol i) const;
    /// Pointer into the map cache for small indices, nullptr beyond it.
    const MapSpec* cached(Symbol i) const;
    const Generator& generator() const { return generator_; }
    const std::optional<MapSpec>& parabolic() const { return parabolic_; }

    /// Declared uniform lower bound on |s_i'| over all indices, if any.
    std::optional<double> declared_uniform_u;

    SystemSpec truncated(Symbol n) const;

private:
    IntervalDomain domain_;
    std::optional<MapSpec> parabolic_;
    Generator generator_;
    std::optional<Symbol> max_index_;
    std::string id_;
    std::shared_ptr<const std::vector<MapSpec>> cache_;
};

/// Axis-aligned parameter box U in R^d.
struct ParamBox {
    std::vector<std::pair<double, double>> axes;

    std::size_t dim() const { return axes.size(); }
    double volume() const;
    bool contains(std::span<const double> t) const;
};

/// A parametrized family t -> S^t with a t-independent parabolic map.
class FamilySpec {
public:
    using Generator = std::function<MapSpec(std::span<const double> t, Symbol i)>;

    FamilySpec(IntervalDomain X, ParamBox U, std::optional<MapSpec> parabolic, Generator generator,
               std::optional<Symbol> max_index, std::string id = "family");
    /// A family that does not depend on t.
    static FamilySpec constant(const SystemSpec& S, ParamBox U);

    const IntervalDomain& domain() const { return domain_; }
    const ParamBox& param_domain() const { return box_; }
    std::optional<Symbol> max_index() const { return max_index_; }
    bool hyperbolic_only() const { return !parabolic_.has_value(); }
    const std::string& id() const { return id_; }

    MapSpec generator(std::span<const double> t, Symbol i) const;
    SystemSpec at(std::span<const double> t) const;

    std::optional<double> declared_uniform_u;
    /// Declared continuity moduli; informational only.
    std::string continuity_note;

private:
    IntervalDomain domain_;
    ParamBox box_;
    std::optional<MapSpec> parabolic_;
    Generator generator_;
    std::optional<Symbol> max_index_;
    std::string id_;

    friend FamilySpec truncate(const FamilySpec& F, Symbol n);
};

/// Family restricted to indices 1..n; parameter domain unchanged.
FamilySpec truncate(const FamilySpec& F, Symbol n);

struct ConditionResult {
    std::string condition;
    Symbol index = 0;  // 0 for system-wide conditions
    bool passed = true;
    bool skipped = false;
    double value = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::size_t grid_pts = 0;
    std::size_t indices_checked = 0;
    bool hyperbolic_only = false;
    std::optional<double> indifferent_point;
    std::optional<double> beta_estimate;
    std::optional<double> L1_estimate;
    std::vector<ConditionResult> entries;

    bool passed() const;
    const ConditionResult* find(const std::string& condition, Symbol index = 0) const;
};

/// Grid-based check of the parabolic and hyperbolic map conditions and of
/// the interior-image condition. Violations are report entries; non-finite
/// evaluations throw EvaluationError. Infinite systems are checked on their
/// first `max_indices` maps.
ValidationReport validate_system(const SystemSpec& S, std::size_t grid_pts = 4096,
                                 std::size_t max_indices = 64);

struct TruncationParams {
    Symbol n = 0;
    double gamma = 0.0;
    double u = 0.0;
    double M = 0.0;
    double theta = 1.0;
    double v = 0.0;
    /// Open interval around v disjoint from the images of s_2..s_n; empty on failure.
    std::optional<std::pair<double, double>> V;
    std::size_t grid_pts = 0;
    bool ok = true;
    std::string failure;
};

/// Constants (V_n, gamma_n, u_n, M_n) for the truncation to indices 1..n.
/// Affine and Moebius maps use their analytic values.
TruncationParams truncation_constants(const SystemSpec& S, Symbol n, std::size_t grid_pts = 4096);

/// Fixed point of a contraction on X (bisection on s(x) - x).
double fixed_point(const MapSpec& s, const IntervalDomain& X);

} // namespace pifs
