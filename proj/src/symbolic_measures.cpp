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

#include "pifs/symbolic_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tail_series.hpp"

namespace pifs {

namespace {

constexpr double kMassTolerance = 1e-12;
constexpr std::size_t kSampleTable = 4096;

inline double neg_xlogx(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

double tail_mass_of(const TailModel& tail) {
    return std::visit(
        [](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, std::monostate>) return 0.0;
            else return t.mass;
        },
        tail);
}

} // namespace

// ---------------------------------------------------------------- Word

Word::Word(std::initializer_list<Symbol> symbols) : Word(std::vector<Symbol>(symbols)) {}

Word::Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    for (Symbol s : symbols_)
        if (s == 0) throw std::domain_error("Word: symbols are 1-based");
}

Word Word::concat(const Word& other) const {
    std::vector<Symbol> out = symbols_;
    out.insert(out.end(), other.symbols_.begin(), other.symbols_.end());
    return Word(std::move(out));
}

std::string Word::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < symbols_.size(); ++k) os << (k ? "," : "") << symbols_[k];
    os << ')';
    return os.str();
}

std::string describe(const TailModel& tail) {
    std::ostringstream os;
    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, std::monostate>) os << "none";
            else if constexpr (std::is_same_v<T, GeometricTail>)
                os << "geometric(ratio=" << t.ratio << ",mass=" << t.mass << ')';
            else if constexpr (std::is_same_v<T, PowerLawTail>)
                os << "powerlaw(exponent=" << t.exponent << ",mass=" << t.mass << ')';
            else
                os << "logpower(log_exponent=" << t.log_exponent << ",shift=" << t.shift
                   << ",mass=" << t.mass << ')';
        },
        tail);
    return os.str();
}

// ---------------------------------------------------------------- BernoulliSpec

BernoulliSpec::BernoulliSpec(std::vector<double> head, TailModel tail)
    : head_(std::move(head)), tail_(std::move(tail)), engine_(detail::make_tail_engine(tail_)) {
    double sum = 0.0;
    for (double p : head_) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("BernoulliSpec: probabilities must be finite and >= 0");
        sum += p;
    }
    sum += tail_mass_of(tail_);
    if (std::abs(sum - 1.0) > kMassTolerance)
        throw std::invalid_argument("BernoulliSpec: total mass " + std::to_string(sum) +
                                    " differs from 1");
    const std::size_t m = head_.size();
    suffix_.assign(m + 1, 0.0);
    suffix_[m] = tail_mass_of(tail_);
    for (std::size_t i = m; i-- > 0;) suffix_[i] = suffix_[i + 1] + head_[i];
}

BernoulliSpec::~BernoulliSpec() = default;

BernoulliSpec::BernoulliSpec(const BernoulliSpec& o)
    : head_(o.head_), tail_(o.tail_), suffix_(o.suffix_),
      engine_(o.engine_ ? o.engine_->clone() : nullptr) {}

BernoulliSpec& BernoulliSpec::operator=(const BernoulliSpec& o) {
    if (this != &o) {
        head_ = o.head_;
        tail_ = o.tail_;
        suffix_ = o.suffix_;
        engine_ = o.engine_ ? o.engine_->clone() : nullptr;
    }
    return *this;
}

BernoulliSpec::BernoulliSpec(BernoulliSpec&&) noexcept = default;
BernoulliSpec& BernoulliSpec::operator=(BernoulliSpec&&) noexcept = default;

BernoulliSpec BernoulliSpec::uniform(std::size_t m) {
    if (m == 0) throw std::invalid_argument("BernoulliSpec::uniform: m must be >= 1");
    return BernoulliSpec(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

BernoulliSpec BernoulliSpec::dirac(Symbol s) {
    if (s == 0) throw std::domain_error("BernoulliSpec::dirac: symbols are 1-based");
    std::vector<double> head(s, 0.0);
    head[s - 1] = 1.0;
    return BernoulliSpec(std::move(head));
}

BernoulliSpec BernoulliSpec::geometric(double ratio) {
    return BernoulliSpec({}, GeometricTail{ratio, 1.0});
}

double BernoulliSpec::tail_mass() const { return suffix_.back(); }

double BernoulliSpec::prob(Symbol i) const {
    if (i == 0) throw std::domain_error("BernoulliSpec::prob: symbols are 1-based");
    if (i <= head_.size()) return head_[i - 1];
    if (!engine_) return 0.0;
    return engine_->prob(static_cast<double>(i - head_.size()));
}

double BernoulliSpec::tail_mass_from(double k0) const {
    return engine_ ? engine_->mass_from(k0) : 0.0;
}

double BernoulliSpec::mass_from(Symbol i) const {
    if (i == 0) throw std::domain_error("BernoulliSpec::mass_from: symbols are 1-based");
    if (i <= head_.size() + 1) return suffix_[i - 1];
    return tail_mass_from(static_cast<double>(i - head_.size()));
}

double BernoulliSpec::mass_from_log_level(double log_level) const {
    if (log_level <= detail::kExactLogLevel)
        return mass_from(static_cast<Symbol>(std::llround(std::exp(log_level))));
    return engine_ ? engine_->mass_from_log(log_level) : 0.0;
}

double BernoulliSpec::head_neg_plogp(std::size_t upto) const {
    double h = 0.0;
    for (std::size_t i = 0; i < std::min(upto, head_.size()); ++i) h += neg_xlogx(head_[i]);
    return h;
}

ExtReal BernoulliSpec::entropy() const {
    const double h = head_neg_plogp(head_.size());
    if (!engine_) return ExtReal(h);
    const ExtReal tail = engine_->neg_plogp_from(1.0);
    if (tail.is_infinite()) return ExtReal::infinity();
    return ExtReal(h + tail.value());
}

std::optional<Symbol> BernoulliSpec::support_max() const {
    if (engine_ && tail_mass() > 0.0) return std::nullopt;
    for (std::size_t i = head_.size(); i-- > 0;)
        if (head_[i] > 0.0) return static_cast<Symbol>(i + 1);
    return static_cast<Symbol>(0);
}

Symbol BernoulliSpec::sample(double u) const {
    // Smallest i with mass_from(i + 1) < u.
    const std::size_t m = head_.size();
    for (std::size_t i = 1; i <= m; ++i)
        if (suffix_[i] < u) return static_cast<Symbol>(i);
    if (!engine_) {
        // Rounding left u above the head total; return the last charged symbol.
        auto top = support_max();
        return top && *top > 0 ? *top : static_cast<Symbol>(m);
    }
    // Relative index search on the tail: smallest k with mass_from(k + 1) < u.
    auto above = [&](double k) { return engine_->mass_from(k + 1.0) >= u; };
    double lo = 1.0;
    if (!above(lo)) return static_cast<Symbol>(m + 1);
    double hi = 2.0;
    while (above(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 0x1.0p62)
            throw std::overflow_error("BernoulliSpec::sample: symbol exceeds 2^62");
    }
    // invariant: above(lo), !above(hi)
    while (hi - lo > 1.0) {
        const double mid = std::floor(0.5 * (lo + hi));
        (above(mid) ? lo : hi) = mid;
    }
    return static_cast<Symbol>(m) + static_cast<Symbol>(hi);
}

double BernoulliSpec::concentrated_entropy_at_log_level(double log_level) const {
    const std::size_t m = head_.size();
    if (log_level <= detail::kExactLogLevel) {
        const auto n = static_cast<std::size_t>(std::llround(std::exp(log_level)));
        if (n < 2) throw std::domain_error("concentration level must be >= 2");
        if (n <= m + 1) return head_neg_plogp(n - 1) + neg_xlogx(mass_from(n));
        const double below = engine_ ? engine_->neg_plogp_below_log(std::log(double(n - m))) : 0.0;
        return head_neg_plogp(m) + below + neg_xlogx(mass_from(n));
    }
    if (!engine_) return head_neg_plogp(m);
    return head_neg_plogp(m) + engine_->neg_plogp_below_log(log_level) +
           neg_xlogx(engine_->mass_from_log(log_level));
}

// ---------------------------------------------------------------- ConcentratedBernoulli

namespace {

std::vector<double> folded_marginal(const BernoulliSpec& mu, std::size_t n) {
    if (n < 2) throw std::domain_error("concentrate: level must be >= 2");
    std::vector<double> q(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) q[i - 1] = mu.prob(i);
    q[n - 1] = mu.mass_from(n);
    return q;
}

} // namespace

ConcentratedBernoulli::ConcentratedBernoulli(std::shared_ptr<const BernoulliSpec> parent,
                                             std::size_t level)
    : parent_(std::move(parent)), level_(level), law_(folded_marginal(*parent_, level)) {}

ConcentratedBernoulli concentrate(std::shared_ptr<const BernoulliSpec> mu, std::size_t n) {
    return ConcentratedBernoulli(std::move(mu), n);
}

ConcentratedBernoulli concentrate(const BernoulliSpec& mu, std::size_t n) {
    return concentrate(std::make_shared<const BernoulliSpec>(mu), n);
}

// ---------------------------------------------------------------- cylinder masses

double cylinder_mass(const BernoulliSpec& mu, const Word& w) {
    const auto top = mu.support_max();
    double mass = 1.0;
    for (Symbol s : w) {
        if (top && s > *top && s > mu.head_size())
            throw std::domain_error("cylinder_mass: symbol " + std::to_string(s) +
                                    " outside the support");
        mass *= mu.prob(s);
    }
    return mass;
}

double cylinder_mass(const ConcentratedBernoulli& mu_n, const Word& w) {
    for (Symbol s : w)
        if (s > mu_n.level())
            throw std::domain_error("cylinder_mass: symbol " + std::to_string(s) +
                                    " exceeds concentration level " + std::to_string(mu_n.level()));
    return cylinder_mass(mu_n.law(), w);
}

double folded_cylinder_mass(const BernoulliSpec& parent, std::size_t n, const Word& w) {
    if (n < 2) throw std::domain_error("folded_cylinder_mass: level must be >= 2");
    double mass = 1.0;
    for (Symbol s : w) {
        if (s > n) throw std::domain_error("folded_cylinder_mass: symbol exceeds level");
        mass *= (s == n) ? parent.mass_from(n) : parent.prob(s);
    }
    return mass;
}

ExtReal entropy(const BernoulliSpec& mu) { return mu.entropy(); }

ExtReal entropy(const ConcentratedBernoulli& mu_n) {
    // Chain rule: splitting the folded mass M_k into p_k and M_{k+1} adds
    // M_k H(p_k / M_k) >= 0. M_k depends on k alone (exact at powers of two,
    // compensated backward sums within each dyadic block), so summing the
    // terms in order keeps h(mu_n) nondecreasing in n under rounding as well.
    const auto& mu = mu_n.parent();
    const std::size_t level = mu_n.level();
    std::vector<double> p, M;
    double h = 0.0;
    for (std::size_t a = 1; a < level; a *= 2) {
        const std::size_t len = a;  // block [a, 2a)
        p.resize(len);
        M.resize(len + 1);
        double sum = mu.mass_from(2 * a), comp = 0.0;
        M[len] = sum;
        for (std::size_t j = len; j-- > 0;) {
            p[j] = mu.prob(a + j);
            const double t = sum + p[j];
            comp += std::abs(sum) >= std::abs(p[j]) ? (sum - t) + p[j] : (p[j] - t) + sum;
            sum = t;
            M[j] = sum + comp;
        }
        for (std::size_t j = 0; j < len && a + j < level; ++j) {
            double term = 0.0;
            if (M[j] > 0.0) {
                if (p[j] > 0.0) term -= p[j] * std::log(p[j] / M[j]);
                if (M[j + 1] > 0.0) term -= M[j + 1] * std::log(M[j + 1] / M[j]);
            }
            h += std::max(term, 0.0);
        }
    }
    return ExtReal(h);
}

// ---------------------------------------------------------------- sampling

Word sample_word(const BernoulliSpec& mu, std::size_t length, const CounterStream& stream) {
    if (length == 0) throw std::invalid_argument("sample_word: length must be >= 1");
    std::vector<Symbol> out(length);
    for (std::size_t j = 0; j < length; ++j) out[j] = mu.sample(stream.uniform(j));
    return Word(std::move(out));
}

Word sample_word(const ConcentratedBernoulli& mu_n, std::size_t length,
                 const CounterStream& stream) {
    return sample_word(mu_n.law(), length, stream);
}

// ---------------------------------------------------------------- diagnostics

double cylinder_discrepancy(const BernoulliSpec& mu, std::size_t n, std::size_t depth,
                            std::size_t symbol_cap, DiscrepancyMode mode) {
    if (depth < 1) throw std::domain_error("cylinder_discrepancy: depth must be >= 1");
    if (symbol_cap < 1) throw std::domain_error("cylinder_discrepancy: symbol cap must be >= 1");
    const bool allowed = symbol_cap < n || (mode == DiscrepancyMode::AllowTopSymbol && symbol_cap == n);
    if (!allowed)
        throw std::domain_error("cylinder_discrepancy: symbol cap must be below the level");
    const double words = std::pow(static_cast<double>(symbol_cap), static_cast<double>(depth));
    if (words > 1e7) throw std::domain_error("cylinder_discrepancy: too many words to enumerate");

    // symbols beyond a finite support carry zero mass under both measures
    const std::size_t top = mu.support_max() ? std::min<std::size_t>(symbol_cap, *mu.support_max())
                                             : symbol_cap;
    const auto mu_n = concentrate(mu, n);
    std::vector<Symbol> w(depth, 1);
    double worst = 0.0;
    for (;;) {
        const Word word(w);
        worst = std::max(worst, std::abs(cylinder_mass(mu_n, word) - cylinder_mass(mu, word)));
        std::size_t pos = depth;
        while (pos > 0 && w[pos - 1] == top) w[--pos] = 1;
        if (pos == 0) break;
        ++w[pos - 1];
    }
    return worst;
}

IndependenceReport independence_check(const CylinderMassFn& mass,
                                      std::span<const std::pair<Word, Word>> pairs,
                                      double tolerance) {
    IndependenceReport report;
    for (const auto& [u, v] : pairs) {
        const double joint = mass(u.concat(v));
        const double product = mass(u) * mass(v);
        ++report.checked;
        if (std::abs(joint - product) > tolerance)
            report.violations.push_back({u, v, joint, product});
    }
    return report;
}

IndependenceReport independence_check(const ConcentratedBernoulli& mu_n,
                                      std::span<const std::pair<Word, Word>> pairs,
                                      double tolerance) {
    IndependenceReport report;
    for (const auto& [u, v] : pairs) {
        const double joint = folded_cylinder_mass(mu_n.parent(), mu_n.level(), u.concat(v));
        const double product = cylinder_mass(mu_n, u) * cylinder_mass(mu_n, v);
        ++report.checked;
        if (std::abs(joint - product) > tolerance)
            report.violations.push_back({u, v, joint, product});
    }
    return report;
}

double finite_shift_union_mass(const BernoulliSpec& mu) {
    return mu.support_max().has_value() ? 1.0 : 0.0;
}

DivergenceTestResult entropy_divergence_test(const BernoulliSpec& mu, double threshold,
                                             double max_log_level) {
    DivergenceTestResult result;
    for (double log_level = std::log(2.0); log_level <= max_log_level; log_level *= 2.0) {
        const double h = mu.concentrated_entropy_at_log_level(log_level);
        ++result.levels_scanned;
        result.log_level = log_level;
        result.entropy_at_level = h;
        if (h > threshold) {
            result.reached = true;
            break;
        }
    }
    return result;
}

} // namespace pifs
