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

// Closed-form and asymptotic sums over the tail of a marginal distribution.
// Relative index k >= 1 throughout; absolute symbol i = head_size + k.

#pragma once

#include <memory>
#include <vector>

#include "pifs/extended_real.hpp"
#include "pifs/symbolic_measures.hpp"

namespace pifs::detail {

class TailEngine {
public:
    virtual ~TailEngine() = default;
    virtual std::unique_ptr<TailEngine> clone() const = 0;

    virtual double prob(double k) const = 0;
    /// Sum_{k >= k0} p_k.
    virtual double mass_from(double k0) const = 0;
    /// Same with k0 = exp(log_k0); valid past the double range of k0.
    virtual double mass_from_log(double log_k0) const = 0;
    /// -Sum_{k >= k0} p_k log p_k.
    virtual ExtReal neg_plogp_from(double k0) const = 0;
    /// -Sum_{1 <= k < exp(log_k1)} p_k log p_k.
    virtual double neg_plogp_below_log(double log_k1) const = 0;
};

std::unique_ptr<TailEngine> make_tail_engine(const TailModel& tail);

/// Sum_{k >= k0} k^-s and Sum_{k >= k0} k^-s log k (s > 1) by Euler-Maclaurin.
struct HurwitzPair {
    double zeta = 0.0;
    double log_moment = 0.0;
};
HurwitzPair hurwitz_pair(double s, double k0);

/// Largest log-level at which levels are still handled as exact integers.
inline constexpr double kExactLogLevel = 36.0;

} // namespace pifs::detail
