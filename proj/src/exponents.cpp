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

#include "pifs/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "pifs/parallel.hpp"
#include "pifs/projection.hpp"
#include "pifs/random.hpp"

namespace pifs {

namespace {

struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
};

// Mean and standard error with pairwise sums; exactly zero spread when all
// values coincide.
SampleStats sample_stats(const std::vector<double>& v) {
    const std::size_t n = v.size();
    SampleStats s;
    if (n == 0) return s;
    s.mean = pairwise_sum(v) / static_cast<double>(n);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo == *hi) {
        s.mean = *lo;
        return s;
    }
    if (n < 2) return s;
    std::vector<double> sq(n);
    for (std::size_t k = 0; k < n; ++k) sq[k] = (v[k] - s.mean) * (v[k] - s.mean);
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    s.std_error = std::sqrt(var / static_cast<double>(n));
    return s;
}

double neg_log_deriv(const MapSpec& s, double x, Symbol i) {
    const double v = -s.log_abs_deriv(x);
    if (!(v < std::numeric_limits<double>::infinity()))
        throw std::domain_error("lyapunov: |s'| = 0 for map " + std::to_string(i) +
                                " at x = " + format_number(x));
    return v;
}

// Per-symbol Lipschitz constants of log|s'|, computed once for cached indices.
class LipschitzTable {
public:
    LipschitzTable(const SystemSpec& S) : S_(S) {
        const Symbol n = std::min<Symbol>(S.max_index().value_or(SystemSpec::kCacheSize),
                                          SystemSpec::kCacheSize);
        lip_.resize(n);
        for (Symbol i = 1; i <= n; ++i) lip_[i - 1] = S.map(i).log_deriv_lipschitz(S.domain());
    }
    double operator()(Symbol i, const MapSpec& s) const {
        return i <= lip_.size() ? lip_[i - 1] : s.log_deriv_lipschitz(S_.domain());
    }

private:
    const SystemSpec& S_;
    std::vector<double> lip_;
};

// Conditional mean of -log|s_i'(y)| for y ~ projected mu.
struct SymbolTerm {
    double mean = 0.0;
    double std_error = 0.0;
    double bias = 0.0;
    bool exact = false;
};

SymbolTerm symbol_term(const SystemSpec& S, const BernoulliSpec& mu, Symbol i, const LyapunovBudgets& b,
                       std::uint64_t seed) {
    const MapSpec s = S.map(i);
    if (s.kind() == MapSpec::Kind::Affine) return {neg_log_deriv(s, 0.0, i), 0.0, 0.0, true};
    const std::size_t N = std::max<std::size_t>(b.per_symbol, 2);
    const std::uint64_t base = derive_seed(seed, Purpose::LyapunovSeries, i);
    const double lip = s.log_deriv_lipschitz(S.domain());
    std::vector<double> vals(N), bias(N);
    parallel_for(N, b.jobs, [&](std::size_t j) {
        const auto y = project(S, measure_word(mu, base, j), b.tol);
        vals[j] = neg_log_deriv(s, y.x, i);
        bias[j] = lip * y.err;
    });
    const auto st = sample_stats(vals);
    return {st.mean, st.std_error, pairwise_sum(bias) / static_cast<double>(N), false};
}

} // namespace

std::string to_string(LyapunovMethod m) {
    switch (m) {
        case LyapunovMethod::MC: return "mc";
        case LyapunovMethod::Series: return "series";
        case LyapunovMethod::Birkhoff: return "birkhoff";
    }
    return "";
}

LyapunovMethod parse_lyapunov_method(const std::string& name) {
    if (name == "mc") return LyapunovMethod::MC;
    if (name == "series") return LyapunovMethod::Series;
    if (name == "birkhoff") return LyapunovMethod::Birkhoff;
    throw std::invalid_argument("unknown Lyapunov method '" + name + "' (mc, series, birkhoff)");
}

LyapunovEstimate lyapunov_mc(const SystemSpec& S, const BernoulliSpec& mu, std::size_t N, double tol,
                             std::uint64_t seed, unsigned jobs) {
    if (N < 100) throw std::domain_error("lyapunov_mc: N must be >= 100");
    const std::uint64_t base = derive_seed(seed, Purpose::LyapunovMC);
    const LipschitzTable lip(S);
    std::vector<double> vals(N), bias(N);
    parallel_for(N, jobs, [&](std::size_t j) {
        const CounterStream stream(base, j);
        const Symbol i = mu.sample(stream.uniform(0));
        const MapSpec s = S.map(i);
        if (s.kind() == MapSpec::Kind::Affine) {
            vals[j] = neg_log_deriv(s, 0.0, i);
            bias[j] = 0.0;
            return;
        }
        const auto y = project(S, measure_word(mu, base, j, 1), tol);
        vals[j] = neg_log_deriv(s, y.x, i);
        bias[j] = lip(i, s) * y.err;
    });
    const auto st = sample_stats(vals);
    LyapunovEstimate est;
    est.mean = st.mean;
    est.std_error = st.std_error;
    est.bias_bound = pairwise_sum(bias) / static_cast<double>(N);
    est.n_samples = N;
    est.method = LyapunovMethod::MC;
    est.verdict_path = "mc: sample mean";
    return est;
}

LyapunovEstimate lyapunov_series(const SystemSpec& S, const BernoulliSpec& mu,
                                 const LyapunovBudgets& b, std::uint64_t seed) {
    LyapunovEstimate est;
    est.method = LyapunovMethod::Series;
    const auto support = mu.support_max();
    if (support && S.max_index() && *support > *S.max_index())
        throw std::domain_error("lyapunov_series: measure charges symbols beyond the system");

    std::vector<double> terms;          // p_i E_i
    std::vector<double> variances;      // (p_i sigma_i)^2
    std::vector<double> biases;         // p_i bias_i
    double lower_sum = 0.0;             // partial sum of per-term lower bounds
    std::deque<double> recent_exact;    // trailing exact terms for the ratio test
    bool all_exact = true;

    auto finish = [&](const std::string& path, double remainder) {
        est.mean = pairwise_sum(terms);
        est.std_error = std::sqrt(pairwise_sum(variances));
        est.bias_bound = pairwise_sum(biases) + remainder;
        est.verdict_path = path;
        return est;
    };

    for (Symbol i = 1;; ++i) {
        if (support && i > *support) return finish("series: finite support", 0.0);
        if (S.max_index() && i > *S.max_index()) {
            if (mu.mass_from(i) > 0.0)
                throw std::domain_error("lyapunov_series: measure charges symbols beyond the system");
            return finish("series: finite system", 0.0);
        }
        if (i > b.max_terms)
            throw EstimatorRefused("lyapunov_series: no usable tail bound after " +
                                   std::to_string(b.max_terms) +
                                   " terms (declare a uniform u or use an affine generator whose terms "
                                   "decay geometrically)");
        const double p = mu.prob(i);
        if (p == 0.0) continue;
        const auto term = symbol_term(S, mu, i, b, seed);
        est.n_samples += term.exact ? 0 : b.per_symbol;
        terms.push_back(p * term.mean);
        variances.push_back(p * term.std_error * p * term.std_error);
        biases.push_back(p * term.bias);
        lower_sum += p * std::max(0.0, term.mean - 3.0 * term.std_error - term.bias);
        all_exact = all_exact && term.exact;

        if (lower_sum > b.divergence_cap) {
            est.mean = lower_sum;
            est.diverged = true;
            est.verdict_path = "series: partial sum of per-term lower bounds exceeded " +
                               format_number(b.divergence_cap) + " at symbol " + std::to_string(i);
            return est;
        }
        if (support) continue;

        const double rest = mu.mass_from(i + 1);
        if (rest == 0.0) return finish("series: no remaining mass", 0.0);
        if (S.declared_uniform_u) {
            const double bound = rest * -std::log(*S.declared_uniform_u);
            if (bound < b.tail_tol) return finish("series: uniform-u remainder bound", bound);
        }
        if (all_exact) {
            recent_exact.push_back(p * term.mean);
            if (recent_exact.size() > 6) recent_exact.pop_front();
            if (recent_exact.size() == 6) {
                double rho = 0.0;
                for (std::size_t k = 1; k < recent_exact.size(); ++k)
                    rho = std::max(rho, recent_exact[k] / recent_exact[k - 1]);
                if (rho < 0.9) {
                    const double bound = recent_exact.back() * rho / (1.0 - rho);
                    if (bound < b.tail_tol) return finish("series: ratio-test remainder bound", bound);
                }
            }
        }
    }
}

LyapunovEstimate lyapunov_birkhoff(const SystemSpec& S, const BernoulliSpec& mu, std::size_t orbit_length,
                                   std::size_t burn_in, std::uint64_t seed) {
    if (!(orbit_length > burn_in)) throw std::domain_error("lyapunov_birkhoff: need orbit_length > burn_in");
    const auto omega = measure_word(mu, derive_seed(seed, Purpose::Birkhoff), 0);
    double x = 0.5 * (S.domain().a + S.domain().b);
    std::vector<double> vals;
    vals.reserve(orbit_length - burn_in);
    for (std::size_t k = 1; k <= orbit_length; ++k) {
        const Symbol i = omega(k - 1);
        const MapSpec* cached = S.cached(i);
        const MapSpec owned = cached ? MapSpec{} : S.map(i);
        const MapSpec& s = cached ? *cached : owned;
        if (k > burn_in) vals.push_back(neg_log_deriv(s, x, i));
        x = s.eval(x);
    }
    LyapunovEstimate est;
    est.method = LyapunovMethod::Birkhoff;
    est.n_samples = vals.size();
    est.verdict_path = "birkhoff: orbit average";
    const auto st = sample_stats(vals);
    est.mean = st.mean;
    constexpr std::size_t kBatches = 32;
    if (st.std_error == 0.0 || vals.size() < 2 * kBatches) {
        est.std_error = st.std_error;
        return est;
    }
    // Batch means absorb the serial correlation along the orbit.
    const std::size_t len = vals.size() / kBatches;
    std::vector<double> means(kBatches);
    for (std::size_t b = 0; b < kBatches; ++b)
        means[b] = pairwise_sum(vals.data() + b * len, len) / static_cast<double>(len);
    est.std_error = sample_stats(means).std_error;
    return est;
}

LyapunovEstimate lyapunov(const SystemSpec& S, const BernoulliSpec& mu, const LyapunovBudgets& b,
                          std::uint64_t seed) {
    switch (b.method) {
        case LyapunovMethod::MC: return lyapunov_mc(S, mu, b.samples, b.tol, seed, b.jobs);
        case LyapunovMethod::Series: return lyapunov_series(S, mu, b, seed);
        case LyapunovMethod::Birkhoff: return lyapunov_birkhoff(S, mu, b.orbit_length, b.burn_in, seed);
    }
    throw std::logic_error("lyapunov: unknown method");
}

LimitCheckReport lyapunov_limit_check(const FamilySpec& F, const BernoulliSpec& mu,
                                      std::span<const double> t, std::span<const Symbol> n_list,
                                      const LyapunovBudgets& budgets, std::uint64_t seed) {
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (!(n_list[k] > n_list[k - 1]))
            throw std::domain_error("lyapunov_limit_check: n_list must be increasing");
    LimitCheckReport rep;
    for (Symbol n : n_list) {
        const auto S_n = truncate(F, n).at(t);
        const auto mu_n = concentrate(mu, n);
        rep.entries.emplace_back(n, lyapunov(S_n, mu_n.law(), budgets, seed));
    }
    const std::size_t m = rep.entries.size();
    for (std::size_t k = m >= 3 ? m - 2 : 1; k < m; ++k)
        rep.max_gap_last3 = std::max(rep.max_gap_last3,
                                     std::abs(rep.entries[k].second.mean - rep.entries[k - 1].second.mean));
    return rep;
}

} // namespace pifs
