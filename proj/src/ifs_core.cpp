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

#include "pifs/ifs_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pifs {

namespace {

std::vector<double> uniform_grid(const IntervalDomain& X, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t j = 0; j < n; ++j)
        g[j] = X.a + X.width() * static_cast<double>(j) / static_cast<double>(n - 1);
    g.back() = X.b;
    return g;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void require_finite(double v, const MapSpec& s, Symbol i, double x, const char* what) {
    if (!std::isfinite(v))
        throw EvaluationError("map " + std::to_string(i) + " (" + s.describe() + "): non-finite " +
                              what + " at x = " + fmt(x));
}

// Grid extremum of |s'| refined between the neighbours of the best grid point.
template <class Better>
double refined_extremum(const MapSpec& s, const std::vector<double>& grid, Better better) {
    std::size_t best = 0;
    double best_val = std::abs(s.deriv(grid[0]));
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const double v = std::abs(s.deriv(grid[j]));
        if (better(v, best_val)) {
            best_val = v;
            best = j;
        }
    }
    double lo = grid[best == 0 ? 0 : best - 1];
    double hi = grid[best + 1 == grid.size() ? best : best + 1];
    for (int round = 0; round < 4; ++round) {
        constexpr int kSub = 16;
        double arg = lo;
        for (int k = 0; k <= kSub; ++k) {
            const double x = lo + (hi - lo) * k / kSub;
            const double v = std::abs(s.deriv(x));
            if (better(v, best_val)) {
                best_val = v;
                arg = x;
            }
        }
        const double step = (hi - lo) / kSub;
        lo = std::max(grid.front(), arg - step);
        hi = std::min(grid.back(), arg + step);
    }
    return best_val;
}

double sup_abs_deriv(const MapSpec& s, const std::vector<double>& grid) {
    if (s.kind() == MapSpec::Kind::Affine) return std::abs(s.rate());
    if (s.kind() == MapSpec::Kind::MoebiusParabolic) return 1.0;
    return refined_extremum(s, grid, [](double a, double b) { return a > b; });
}

double inf_abs_deriv(const MapSpec& s, const std::vector<double>& grid, const IntervalDomain& X) {
    if (s.kind() == MapSpec::Kind::Affine) return std::abs(s.rate());
    if (s.kind() == MapSpec::Kind::MoebiusParabolic) return std::abs(s.deriv(X.b));
    return refined_extremum(s, grid, [](double a, double b) { return a < b; });
}

// sup |s'(x) - s'(y)| / |x - y|^theta over adjacent grid pairs and all pairs
// of a 129-point subgrid.
double holder_quotient(const MapSpec& s, const std::vector<double>& grid, double theta,
                       const IntervalDomain& X) {
    if (s.kind() == MapSpec::Kind::Affine) return 0.0;
    if (s.kind() == MapSpec::Kind::MoebiusParabolic && theta == 1.0) return 2.0 / X.width();
    double best = 0.0;
    std::vector<double> d(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) d[j] = s.deriv(grid[j]);
    for (std::size_t j = 1; j < grid.size(); ++j)
        best = std::max(best, std::abs(d[j] - d[j - 1]) / std::pow(grid[j] - grid[j - 1], theta));
    const auto sub = uniform_grid(X, 129);
    std::vector<double> ds(sub.size());
    for (std::size_t j = 0; j < sub.size(); ++j) ds[j] = s.deriv(sub[j]);
    for (std::size_t j = 0; j < sub.size(); ++j)
        for (std::size_t k = j + 1; k < sub.size(); ++k)
            best = std::max(best, std::abs(ds[k] - ds[j]) / std::pow(sub[k] - sub[j], theta));
    return best;
}

// Distance from v to the interval [lo, hi]; 0 when v lies inside.
double distance_to(double v, std::pair<double, double> iv) {
    if (v < iv.first) return iv.first - v;
    if (v > iv.second) return v - iv.second;
    return 0.0;
}

} // namespace

IntervalDomain::IntervalDomain(double lo, double hi) : a(lo), b(hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo))
        throw std::domain_error("IntervalDomain: need finite endpoints with a < b");
}

// ---------------------------------------------------------------- MapSpec

MapSpec MapSpec::affine(double rate, double offset) {
    if (!std::isfinite(rate) || !std::isfinite(offset))
        throw std::domain_error("affine map: rate and offset must be finite");
    MapSpec m;
    m.kind_ = Kind::Affine;
    m.rate_ = rate;
    m.offset_ = offset;
    m.log_abs_rate_ = std::log(std::abs(rate));
    return m;
}

MapSpec MapSpec::affine_log(double log_abs_rate, double sign, double offset) {
    if (std::isnan(log_abs_rate) || log_abs_rate == std::numeric_limits<double>::infinity() ||
        !std::isfinite(offset))
        throw std::domain_error("affine map: log rate and offset must be finite");
    MapSpec m;
    m.kind_ = Kind::Affine;
    m.rate_ = std::copysign(std::exp(log_abs_rate), sign);
    m.offset_ = offset;
    m.log_abs_rate_ = log_abs_rate;
    return m;
}

MapSpec MapSpec::moebius(const IntervalDomain& X) {
    MapSpec m;
    m.kind_ = Kind::MoebiusParabolic;
    m.origin_ = X.a;
    m.scale_ = X.width();
    m.theta_ = 1.0;
    return m;
}

MapSpec MapSpec::user(UserFunctions f) {
    if (!f.eval || !f.deriv) throw std::invalid_argument("user map: eval and deriv are required");
    if (!(f.theta > 0.0 && f.theta <= 1.0))
        throw std::domain_error("user map: theta must lie in (0, 1]");
    MapSpec m;
    m.kind_ = Kind::User;
    m.theta_ = f.theta;
    m.user_ = std::make_shared<const UserFunctions>(std::move(f));
    return m;
}

double MapSpec::eval(double x) const {
    switch (kind_) {
        case Kind::Affine: return rate_ * x + offset_;
        case Kind::MoebiusParabolic: {
            const double y = (x - origin_) / scale_;
            return origin_ + scale_ * y / (1.0 + y);
        }
        case Kind::User: return user_->eval(x);
    }
    return 0.0;
}

double MapSpec::deriv(double x) const {
    switch (kind_) {
        case Kind::Affine: return rate_;
        case Kind::MoebiusParabolic: {
            const double y = (x - origin_) / scale_;
            return 1.0 / ((1.0 + y) * (1.0 + y));
        }
        case Kind::User: return user_->deriv(x);
    }
    return 0.0;
}

double MapSpec::log_abs_deriv(double x) const {
    switch (kind_) {
        case Kind::Affine: return log_abs_rate_;
        case Kind::MoebiusParabolic: return -2.0 * std::log1p((x - origin_) / scale_);
        case Kind::User: return std::log(std::abs(user_->deriv(x)));
    }
    return 0.0;
}

std::pair<double, double> MapSpec::image(double lo, double hi) const {
    const double p = eval(lo);
    const double q = eval(hi);
    return p <= q ? std::pair{p, q} : std::pair{q, p};
}

double MapSpec::log_deriv_lipschitz(const IntervalDomain& X) const {
    switch (kind_) {
        case Kind::Affine: return 0.0;
        case Kind::MoebiusParabolic: return 2.0 / scale_;
        case Kind::User: {
            const auto g = uniform_grid(X, 129);
            double best = 0.0;
            double prev = log_abs_deriv(g[0]);
            for (std::size_t j = 1; j < g.size(); ++j) {
                const double cur = log_abs_deriv(g[j]);
                best = std::max(best, std::abs(cur - prev) / (g[j] - g[j - 1]));
                prev = cur;
            }
            return best;
        }
    }
    return 0.0;
}

std::string MapSpec::describe() const {
    switch (kind_) {
        case Kind::Affine:
            return "affine(rate=" + fmt(rate_) + ", offset=" + fmt(offset_) + ")";
        case Kind::MoebiusParabolic:
            return "moebius(a=" + fmt(origin_) + ", L=" + fmt(scale_) + ")";
        case Kind::User:
            return "user(" + user_->label + ")";
    }
    return "";
}

// ---------------------------------------------------------------- SystemSpec

SystemSpec::SystemSpec(IntervalDomain X, std::optional<MapSpec> parabolic, Generator generator,
                       std::optional<Symbol> max_index, std::string id)
    : domain_(X), parabolic_(std::move(parabolic)), generator_(std::move(generator)),
      max_index_(max_index), id_(std::move(id)) {
    if (!generator_ && !(parabolic_ && max_index_ && *max_index_ == 1))
        throw std::invalid_argument("SystemSpec: missing map generator");
    if (max_index_ && *max_index_ < 1) throw std::domain_error("SystemSpec: max_index must be >= 1");
    const Symbol count = std::min(max_index_.value_or(kCacheSize), kCacheSize);
    auto cache = std::make_shared<std::vector<MapSpec>>();
    cache->reserve(count);
    for (Symbol i = 1; i <= count; ++i)
        cache->push_back(i == 1 && parabolic_ ? *parabolic_ : generator_(i));
    cache_ = std::move(cache);
}

SystemSpec SystemSpec::finite(IntervalDomain X, std::optional<MapSpec> parabolic,
                              std::vector<MapSpec> maps, std::string id) {
    const Symbol first = parabolic ? 2 : 1;
    const Symbol count = static_cast<Symbol>(maps.size()) + first - 1;
    auto shared = std::make_shared<const std::vector<MapSpec>>(std::move(maps));
    Generator gen = [shared, first](Symbol i) { return (*shared)[i - first]; };
    return SystemSpec(X, std::move(parabolic), std::move(gen), count, std::move(id));
}

double SystemSpec::theta() const { return parabolic_ ? parabolic_->theta() : 1.0; }

MapSpec SystemSpec::map(Symbol i) const {
    if (i < 1 || (max_index_ && i > *max_index_))
        throw std::domain_error("system " + id_ + ": symbol " + std::to_string(i) +
                                " outside the index set");
    if (i <= cache_->size()) return (*cache_)[i - 1];
    return generator_(i);
}

const MapSpec* SystemSpec::cached(Symbol i) const {
    if (i < 1 || i > cache_->size() || (max_index_ && i > *max_index_)) return nullptr;
    return &(*cache_)[i - 1];
}

SystemSpec SystemSpec::truncated(Symbol n) const {
    if (n < 1) throw std::domain_error("SystemSpec::truncated: n must be >= 1");
    SystemSpec out = *this;
    out.max_index_ = max_index_ ? std::min(*max_index_, n) : n;
    return out;
}

// ---------------------------------------------------------------- families

double ParamBox::volume() const {
    double v = 1.0;
    for (const auto& [lo, hi] : axes) v *= hi - lo;
    return v;
}

bool ParamBox::contains(std::span<const double> t) const {
    if (t.size() != axes.size()) return false;
    for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k] < axes[k].first || t[k] > axes[k].second) return false;
    return true;
}

FamilySpec::FamilySpec(IntervalDomain X, ParamBox U, std::optional<MapSpec> parabolic,
                       Generator generator, std::optional<Symbol> max_index, std::string id)
    : domain_(X), box_(std::move(U)), parabolic_(std::move(parabolic)),
      generator_(std::move(generator)), max_index_(max_index), id_(std::move(id)) {
    if (box_.dim() < 1 || box_.dim() > kMaxParamDim)
        throw std::domain_error("FamilySpec: parameter dimension must lie in 1..8");
    for (const auto& [lo, hi] : box_.axes)
        if (!(hi > lo)) throw std::domain_error("FamilySpec: empty parameter interval");
    if (!generator_) throw std::invalid_argument("FamilySpec: missing generator");
}

FamilySpec FamilySpec::constant(const SystemSpec& S, ParamBox U) {
    FamilySpec F(
        S.domain(), std::move(U), S.parabolic(),
        [S](std::span<const double>, Symbol i) { return S.map(i); }, S.max_index(),
        S.id());
    F.declared_uniform_u = S.declared_uniform_u;
    F.continuity_note = "constant in t";
    return F;
}

MapSpec FamilySpec::generator(std::span<const double> t, Symbol i) const {
    if (i < 1 || (max_index_ && i > *max_index_))
        throw std::domain_error("family " + id_ + ": symbol " + std::to_string(i) +
                                " outside the index set");
    if (i == 1 && parabolic_) return *parabolic_;
    return generator_(t, i);
}

SystemSpec FamilySpec::at(std::span<const double> t) const {
    if (t.size() != box_.dim())
        throw std::domain_error("family " + id_ + ": parameter has dimension " +
                                std::to_string(t.size()) + ", expected " +
                                std::to_string(box_.dim()));
    std::vector<double> tt(t.begin(), t.end());
    auto gen = generator_;
    SystemSpec S(domain_, parabolic_,
                 [gen, tt](Symbol i) { return gen(tt, i); }, max_index_, id_);
    S.declared_uniform_u = declared_uniform_u;
    return S;
}

FamilySpec truncate(const FamilySpec& F, Symbol n) {
    if (n < 2) throw std::domain_error("truncate: n must be >= 2");
    FamilySpec out = F;
    out.max_index_ = F.max_index_ ? std::min(*F.max_index_, n) : n;
    return out;
}

// ---------------------------------------------------------------- validation

bool ValidationReport::passed() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const ConditionResult& c) { return c.skipped || c.passed; });
}

const ConditionResult* ValidationReport::find(const std::string& condition, Symbol index) const {
    for (const auto& c : entries)
        if (c.condition == condition && c.index == index) return &c;
    return nullptr;
}

double fixed_point(const MapSpec& s, const IntervalDomain& X) {
    if (s.kind() == MapSpec::Kind::Affine && s.rate() != 1.0) return s.offset() / (1.0 - s.rate());
    if (s.kind() == MapSpec::Kind::MoebiusParabolic) return X.a;
    double lo = X.a;
    double hi = X.b;
    const double f_lo = s.eval(lo) - lo;
    if (f_lo == 0.0) return lo;
    for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double f = s.eval(mid) - mid;
        if ((f > 0.0) == (f_lo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

struct ParabolicFacts {
    double v = 0.0;
    double deriv_at_v = 0.0;
};

ParabolicFacts locate_indifferent(const MapSpec& s, const std::vector<double>& grid,
                                  const IntervalDomain& X) {
    if (s.kind() == MapSpec::Kind::MoebiusParabolic) return {X.a, 1.0};
    std::size_t best = 0;
    for (std::size_t j = 1; j < grid.size(); ++j)
        if (std::abs(s.deriv(grid[j])) > std::abs(s.deriv(grid[best]))) best = j;
    double lo = grid[best == 0 ? 0 : best - 1];
    double hi = grid[best + 1 == grid.size() ? best : best + 1];
    double arg = grid[best];
    for (int round = 0; round < 6; ++round) {
        constexpr int kSub = 32;
        double best_val = std::abs(s.deriv(arg));
        for (int k = 0; k <= kSub; ++k) {
            const double x = lo + (hi - lo) * k / kSub;
            const double v = std::abs(s.deriv(x));
            if (v > best_val) {
                best_val = v;
                arg = x;
            }
        }
        const double step = (hi - lo) / kSub;
        lo = std::max(X.a, arg - step);
        hi = std::min(X.b, arg + step);
    }
    return {arg, s.deriv(arg)};
}

} // namespace

ValidationReport validate_system(const SystemSpec& S, std::size_t grid_pts, std::size_t max_indices) {
    if (grid_pts < 64) throw std::domain_error("validate_system: grid_pts must be >= 64");
    const IntervalDomain& X = S.domain();
    const auto grid = uniform_grid(X, grid_pts);
    const double slack = 1e-12 * X.width();
    const double h = X.width() / static_cast<double>(grid_pts - 1);

    ValidationReport rep;
    rep.grid_pts = grid_pts;
    rep.hyperbolic_only = S.hyperbolic_only();
    const Symbol count =
        std::min<Symbol>(S.max_index().value_or(max_indices), static_cast<Symbol>(max_indices));
    rep.indices_checked = count;

    rep.entries.push_back({"index_count", 0, count >= 2, false, static_cast<double>(count),
                           count >= 2 ? "" : "a system needs at least two maps"});

    // Indifferent point: the parabolic map's, or the fixed point of s_1 for
    // purely hyperbolic fixtures.
    double v = 0.0;
    if (!S.hyperbolic_only()) {
        const MapSpec s1 = S.map(1);
        const auto facts = locate_indifferent(s1, grid, X);
        v = facts.v;
        rep.indifferent_point = v;
        const bool unit = std::abs(std::abs(facts.deriv_at_v) - 1.0) <= 1e-9;
        const bool fixed = std::abs(s1.eval(v) - v) <= 1e-9 * X.width();
        rep.entries.push_back({"indifferent_point", 1, unit && fixed, false, v,
                               "|s'(v)| = " + fmt(std::abs(facts.deriv_at_v)) +
                                   ", s(v) - v = " + fmt(s1.eval(v) - v)});

        // Uniqueness: no other grid point (beyond two cells from v) reaches |s'| = 1.
        bool unique = true;
        double worst = 0.0;
        for (double x : grid) {
            if (std::abs(x - v) <= 2.0 * h) continue;
            const double d = std::abs(s1.deriv(x));
            worst = std::max(worst, d);
            if (d >= 1.0 - 1e-12) unique = false;
        }
        rep.entries.push_back({"unique_indifferent", 1, unique, false, worst,
                               "max |s'| away from v = " + fmt(worst)});

        // s' monotone on each component of X \ {v}.
        auto monotone_on = [&](double lo, double hi) {
            std::vector<double> d;
            for (double x : grid)
                if (x > lo && x < hi) d.push_back(s1.deriv(x));
            if (d.size() < 2) return true;
            const double tol = 1e-14;
            bool inc = true, dec = true;
            for (std::size_t k = 1; k < d.size(); ++k) {
                if (d[k] < d[k - 1] - tol) inc = false;
                if (d[k] > d[k - 1] + tol) dec = false;
            }
            return inc || dec;
        };
        const bool mono = monotone_on(X.a - 1.0, v) && monotone_on(v, X.b + 1.0);
        rep.entries.push_back({"derivative_monotone", 1, mono, false, 0.0,
                               mono ? "" : "s' changes monotonicity on a component of X \\ {v}"});

        // beta and L_1 from two decades of x - v.
        const double dv = s1.deriv(v);
        double beta_worst = 0.0;
        double L1 = 1.0;
        bool beta_ok = true;
        int sides = 0;
        for (double sign : {-1.0, 1.0}) {
            const double d1 = 1e-3 * X.width();
            const double d2 = 1e-4 * X.width();
            const double x1 = v + sign * d1;
            const double x2 = v + sign * d2;
            if (!X.contains(x1) || !X.contains(x2)) continue;
            ++sides;
            const double g1 = std::abs(s1.deriv(x1) - dv);
            const double g2 = std::abs(s1.deriv(x2) - dv);
            if (!(g1 > 0.0 && g2 > 0.0)) {
                beta_ok = false;
                continue;
            }
            const double beta = std::log(g1 / g2) / std::log(d1 / d2);
            beta_worst = std::max(beta_worst, beta);
            for (auto [g, d] : {std::pair{g1, d1}, std::pair{g2, d2}}) {
                const double q = g / std::pow(d, beta);
                L1 = std::max({L1, q, 1.0 / q});
            }
        }
        const double theta = s1.theta();
        const double beta_cap =
            theta >= 1.0 ? std::numeric_limits<double>::infinity() : theta / (1.0 - theta);
        beta_ok = beta_ok && sides > 0 && beta_worst < beta_cap;
        rep.beta_estimate = beta_worst;
        rep.L1_estimate = L1;
        rep.entries.push_back({"beta_bracket", 1, beta_ok, false, beta_worst,
                               "estimate: beta = " + fmt(beta_worst) + ", L1 = " + fmt(L1) +
                                   ", theta = " + fmt(theta)});
    } else {
        v = fixed_point(S.map(1), X);
        rep.indifferent_point.reset();
        for (const char* name :
             {"indifferent_point", "unique_indifferent", "derivative_monotone", "beta_bracket"})
            rep.entries.push_back({name, 1, true, true, 0.0, "hyperbolic-only system"});
    }

    for (Symbol i = 1; i <= count; ++i) {
        const MapSpec s = S.map(i);
        const bool parabolic = (i == 1 && !S.hyperbolic_only());
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double dmax = 0.0;
        double dmin = std::numeric_limits<double>::infinity();
        bool sign_pos = false, sign_neg = false, zero = false;
        double dmax_off_v = 0.0;
        for (double x : grid) {
            const double y = s.eval(x);
            const double d = s.deriv(x);
            require_finite(y, s, i, x, "value");
            require_finite(d, s, i, x, "derivative");
            lo = std::min(lo, y);
            hi = std::max(hi, y);
            dmax = std::max(dmax, std::abs(d));
            dmin = std::min(dmin, std::abs(d));
            if (d > 0) sign_pos = true;
            if (d < 0) sign_neg = true;
            if (d == 0) zero = true;
            if (!(parabolic && x == v)) dmax_off_v = std::max(dmax_off_v, std::abs(d));
        }

        const bool self_map = lo >= X.a - slack && hi <= X.b + slack;
        rep.entries.push_back({"self_map", i, self_map, false, std::max(X.a - lo, hi - X.b),
                               "image [" + fmt(lo) + ", " + fmt(hi) + "]"});

        const bool monotone = !zero && !(sign_pos && sign_neg);
        rep.entries.push_back({"monotone", i, monotone, false, dmin,
                               monotone ? "" : "derivative vanishes or changes sign"});

        const bool contraction = parabolic ? dmax_off_v < 1.0 && dmin > 0.0 : dmax < 1.0 && dmin > 0.0;
        rep.entries.push_back({"contraction", i, contraction, false, parabolic ? dmax_off_v : dmax,
                               "sup |s'| = " + fmt(parabolic ? dmax_off_v : dmax) +
                                   (parabolic ? " off v" : "")});

        if (i >= 2) {
            if (S.hyperbolic_only()) {
                rep.entries.push_back({"interior_image", i, true, true, 0.0, "hyperbolic-only system"});
            } else {
                const double margin = std::min({lo - X.a, X.b - hi, distance_to(v, {lo, hi})});
                rep.entries.push_back({"interior_image", i, margin > 0.0, false, margin,
                                       "image [" + fmt(lo) + ", " + fmt(hi) + "], v = " + fmt(v)});
            }
        }
    }
    return rep;
}

TruncationParams truncation_constants(const SystemSpec& S, Symbol n, std::size_t grid_pts) {
    if (n < 2) throw std::domain_error("truncation_constants: n must be >= 2");
    if (S.max_index() && n > *S.max_index())
        throw std::domain_error("truncation_constants: index " + std::to_string(n) +
                                " exceeds the system size");
    if (grid_pts < 64) throw std::domain_error("truncation_constants: grid_pts must be >= 64");
    const IntervalDomain& X = S.domain();
    const auto grid = uniform_grid(X, grid_pts);

    TruncationParams tp;
    tp.n = n;
    tp.grid_pts = grid_pts;
    tp.theta = S.theta();
    tp.v = S.hyperbolic_only() ? fixed_point(S.map(1), X)
                               : locate_indifferent(S.map(1), grid, X).v;
    tp.u = std::numeric_limits<double>::infinity();
    double radius = std::numeric_limits<double>::infinity();
    const Symbol first_hyperbolic = S.hyperbolic_only() ? 1 : 2;
    for (Symbol i = 1; i <= n; ++i) {
        const MapSpec s = S.map(i);
        if (i >= first_hyperbolic) tp.gamma = std::max(tp.gamma, sup_abs_deriv(s, grid));
        tp.u = std::min(tp.u, inf_abs_deriv(s, grid, X));
        tp.M = std::max(tp.M, holder_quotient(s, grid, tp.theta, X));
        if (i >= 2) {
            std::pair<double, double> img;
            if (s.kind() == MapSpec::Kind::User) {
                img = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
                for (double x : grid) {
                    const double y = s.eval(x);
                    img.first = std::min(img.first, y);
                    img.second = std::max(img.second, y);
                }
            } else {
                img = s.image(X.a, X.b);
            }
            radius = std::min(radius, distance_to(tp.v, img));
        }
    }
    if (radius > 0.0) tp.V = std::pair{tp.v - radius, tp.v + radius};

    if (!(tp.u > 0.0)) {
        tp.ok = false;
        tp.failure = "u_n = 0: some derivative vanishes";
    } else if (!tp.V) {
        tp.ok = false;
        tp.failure = "V_n empty: an image of s_2..s_n contains v";
    } else if (!(tp.gamma < 1.0)) {
        tp.ok = false;
        tp.failure = "gamma_n >= 1: a hyperbolic map is not contracting";
    }
    return tp;
}

} // namespace pifs
