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
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pifs/ifs_core.hpp"
#include "pifs/symbolic_measures.hpp"

namespace pifs {

enum class LyapunovMethod { MC, Series, Birkhoff };

std::string to_string(LyapunovMethod m);
LyapunovMethod parse_lyapunov_method(const std::string& name);

/// Estimate of lambda = -int log|s'_{omega_1}(pi(sigma omega))| dmu.
struct LyapunovEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    /// Bound on the bias from projection error and series truncation.
    double bias_bound = 0.0;
    std::size_t n_samples = 0;
    LyapunovMethod method = LyapunovMethod::MC;
    /// lambda = +inf verdict; mean is then a lower bound, not a value.
    bool diverged = false;
    /// Which route produced the result.
    std::string verdict_path;

    double uncertainty() const { return std_error + bias_bound; }
};

/// Raised when an estimator cannot certify its answer (no usable tail bound).
class EstimatorRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LyapunovBudgets {
    std::size_t samples = 100000;     // MC sample count
    std::size_t per_symbol = 100000;  // series: MC samples per non-affine symbol
    std::size_t orbit_length = 100000;
    std::size_t burn_in = 1000;
    double tol = 1e-10;               // projection tolerance for integrand points
    double divergence_cap = 100.0;    // series: lower-bound sum that certifies divergence
    double tail_tol = 1e-12;          // series: remainder bound that stops summation
    std::size_t max_terms = 4096;
    LyapunovMethod method = LyapunovMethod::Series;
    unsigned jobs = 1;
};

/// Direct Monte Carlo over omega ~ mu.
LyapunovEstimate lyapunov_mc(const SystemSpec& S, const BernoulliSpec& mu, std::size_t N, double tol,
                             std::uint64_t seed, unsigned jobs = 1);

/// Sum_i p_i E_i with E_i exact for affine maps and a per-symbol Monte Carlo
/// mean otherwise. Infinite series stop on a ratio-test or uniform-u
/// remainder bound, are declared divergent once the partial sum of per-term
/// lower bounds exceeds the cap, and otherwise throw EstimatorRefused.
LyapunovEstimate lyapunov_series(const SystemSpec& S, const BernoulliSpec& mu,
                                 const LyapunovBudgets& budgets, std::uint64_t seed);

/// Ergodic average along one random orbit x_k = s_{omega_k}(x_{k-1}) started
/// at the midpoint of X; batch-means standard error.
LyapunovEstimate lyapunov_birkhoff(const SystemSpec& S, const BernoulliSpec& mu, std::size_t orbit_length,
                                   std::size_t burn_in, std::uint64_t seed);

/// Dispatches on budgets.method.
LyapunovEstimate lyapunov(const SystemSpec& S, const BernoulliSpec& mu, const LyapunovBudgets& budgets,
                          std::uint64_t seed);

struct LimitCheckReport {
    std::vector<std::pair<Symbol, LyapunovEstimate>> entries;
    /// Largest successive gap among the final three entries.
    double max_gap_last3 = 0.0;
};

/// lambda of the n-th concentrating measure on the n-th truncated system, for each n.
LimitCheckReport lyapunov_limit_check(const FamilySpec& F, const BernoulliSpec& mu,
                                      std::span<const double> t, std::span<const Symbol> n_list,
                                      const LyapunovBudgets& budgets, std::uint64_t seed);

} // namespace pifs
