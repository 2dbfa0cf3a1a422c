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
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pifs/extended_real.hpp"
#include "pifs/random.hpp"

namespace pifs {

using Symbol = std::uint64_t;

/// Finite word over the positive integers; the empty word is the full space.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<Symbol> symbols);
    explicit Word(std::vector<Symbol> symbols);

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    Symbol operator[](std::size_t k) const { return symbols_[k]; }
    auto begin() const { return symbols_.begin(); }
    auto end() const { return symbols_.end(); }
    const std::vector<Symbol>& symbols() const { return symbols_; }

    Word concat(const Word& other) const;
    std::string to_string() const;

    friend bool operator==(const Word&, const Word&) = default;

private:
    std::vector<Symbol> symbols_;
};

// Tail models. Relative index k = i - head_size, k >= 1.

/// p_{m+k} = mass * (1 - ratio) * ratio^(k-1).
struct GeometricTail {
    double ratio = 0.5;
    double mass = 1.0;
};

/// p_{m+k} = mass * k^(-exponent) / zeta(exponent), exponent > 1.
struct PowerLawTail {
    double exponent = 2.0;
    double mass = 1.0;
};

/// p_{m+k} = mass * w_k / W with w_k = 1 / (k * log(k + shift)^log_exponent),
/// log_exponent in (1, 2]. Summable, but with infinite entropy.
struct LogPowerTail {
    double log_exponent = 2.0;
    double shift = 2.0;
    double mass = 1.0;
};

using TailModel = std::variant<std::monostate, GeometricTail, PowerLawTail, LogPowerTail>;

std::string describe(const TailModel& tail);

namespace detail {
class TailEngine;
}

/// Independent identically distributed product measure on N^infinity with
/// marginal (p_1, ..., p_m, tail). Immutable once built.
class BernoulliSpec {
public:
    BernoulliSpec(std::vector<double> head, TailModel tail = std::monostate{});
    ~BernoulliSpec();
    BernoulliSpec(const BernoulliSpec&);
    BernoulliSpec& operator=(const BernoulliSpec&);
    BernoulliSpec(BernoulliSpec&&) noexcept;
    BernoulliSpec& operator=(BernoulliSpec&&) noexcept;

    static BernoulliSpec uniform(std::size_t m);
    static BernoulliSpec dirac(Symbol s);
    /// p_i = (1 - ratio) ratio^(i-1); ratio 1/2 gives p_i = 2^-i.
    static BernoulliSpec geometric(double ratio);

    double prob(Symbol i) const;
    /// Sum_{j >= i} p_j, from closed-form tail sums.
    double mass_from(Symbol i) const;
    /// Same as mass_from for a level given by its natural log; used where the
    /// level exceeds 2^63.
    double mass_from_log_level(double log_level) const;

    /// -Sum p_i log p_i, +inf when the series diverges.
    ExtReal entropy() const;

    /// Largest symbol with positive mass, or nullopt for infinite support.
    std::optional<Symbol> support_max() const;
    std::size_t head_size() const { return head_.size(); }
    std::span<const double> head() const { return head_; }
    const TailModel& tail() const { return tail_; }
    double tail_mass() const;

    /// Inverse CDF: maps u in (0, 1] to a symbol.
    Symbol sample(double u) const;

    /// -Sum_{i < n} p_i log p_i - q_n log q_n with q_n = mass_from(n), for
    /// n = exp(log_level) (rounded when representable).
    double concentrated_entropy_at_log_level(double log_level) const;

private:
    std::vector<double> head_;
    TailModel tail_;
    std::vector<double> suffix_;  // suffix_[i-1] = mass_from(i) for 1 <= i <= table size
    std::unique_ptr<detail::TailEngine> engine_;

    double tail_mass_from(double k0) const;
    double head_neg_plogp(std::size_t upto) const;
};

/// The n-th concentrating measure: marginal (p_1, ..., p_{n-1}, Sum_{i>=n} p_i).
class ConcentratedBernoulli {
public:
    ConcentratedBernoulli(std::shared_ptr<const BernoulliSpec> parent, std::size_t level);

    std::size_t level() const { return level_; }
    std::vector<double> probs() const { return {law_.head().begin(), law_.head().end()}; }
    const BernoulliSpec& parent() const { return *parent_; }
    /// The concentrated marginal as a finite-support product measure.
    const BernoulliSpec& law() const { return law_; }

private:
    std::shared_ptr<const BernoulliSpec> parent_;
    std::size_t level_;
    BernoulliSpec law_;
};

ConcentratedBernoulli concentrate(const BernoulliSpec& mu, std::size_t n);
ConcentratedBernoulli concentrate(std::shared_ptr<const BernoulliSpec> mu, std::size_t n);

double cylinder_mass(const BernoulliSpec& mu, const Word& w);
double cylinder_mass(const ConcentratedBernoulli& mu_n, const Word& w);

/// mu_n([w]) evaluated from the parent by folding every occurrence of the
/// top symbol n onto the tail of the parent marginal.
double folded_cylinder_mass(const BernoulliSpec& parent, std::size_t n, const Word& w);

ExtReal entropy(const BernoulliSpec& mu);
ExtReal entropy(const ConcentratedBernoulli& mu_n);

Word sample_word(const BernoulliSpec& mu, std::size_t length, const CounterStream& stream);
Word sample_word(const ConcentratedBernoulli& mu_n, std::size_t length, const CounterStream& stream);

enum class DiscrepancyMode { Strict, AllowTopSymbol };

/// max over w in {1..m}^L of |mu_n([w]) - mu([w])|.
double cylinder_discrepancy(const BernoulliSpec& mu, std::size_t n, std::size_t depth,
                            std::size_t symbol_cap,
                            DiscrepancyMode mode = DiscrepancyMode::Strict);

using CylinderMassFn = std::function<double(const Word&)>;

struct IndependenceViolation {
    Word u;
    Word v;
    double joint = 0.0;
    double product = 0.0;
};

struct IndependenceReport {
    std::size_t checked = 0;
    std::vector<IndependenceViolation> violations;
    bool passed() const { return violations.empty(); }
};

IndependenceReport independence_check(const CylinderMassFn& mass,
                                      std::span<const std::pair<Word, Word>> pairs,
                                      double tolerance = 1e-12);
/// Joint masses use the folded route, marginals the product route.
IndependenceReport independence_check(const ConcentratedBernoulli& mu_n,
                                      std::span<const std::pair<Word, Word>> pairs,
                                      double tolerance = 1e-12);

/// mu(union_n N_n^infinity): 1 for finite support, 0 otherwise.
double finite_shift_union_mass(const BernoulliSpec& mu);

struct DivergenceTestResult {
    bool reached = false;
    double log_level = 0.0;      // natural log of the first level exceeding the threshold
    double entropy_at_level = 0.0;
    std::size_t levels_scanned = 0;
};

/// Scans h(mu_n) along n = 2, 4, 16, 256, ... (log n doubling) until it
/// exceeds `threshold` or log n exceeds `max_log_level`.
DivergenceTestResult entropy_divergence_test(const BernoulliSpec& mu, double threshold,
                                             double max_log_level = 1e12);

} // namespace pifs
