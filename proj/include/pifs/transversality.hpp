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
#include <iosfwd>
#include <string>
#include <vector>

#include "pifs/ifs_core.hpp"
#include "pifs/projection.hpp"
#include "pifs/symbolic_measures.hpp"

namespace pifs {

/// Cell-centered grid over a parameter box with per-axis counts.
class ParamGrid {
public:
    ParamGrid(ParamBox box, std::vector<std::size_t> counts);

    const ParamBox& box() const { return box_; }
    const std::vector<std::size_t>& counts() const { return counts_; }
    std::size_t dim() const { return counts_.size(); }
    std::size_t size() const { return size_; }
    /// Cell width along an axis.
    double resolution(std::size_t axis) const;
    /// Row-major point; the last axis varies fastest.
    std::vector<double> point(std::size_t index) const;

private:
    ParamBox box_;
    std::vector<std::size_t> counts_;
    std::size_t size_ = 0;
};

struct SeparationProfile {
    /// f(t) = |pi_t(omega) - pi_t(tau)| at each grid point.
    std::vector<double> f;
    /// Certified bound on |f - true separation|, at most 2 tol.
    std::vector<double> err;
    double min_f = 0.0;
    std::vector<std::string> warnings;
};

SeparationProfile pair_separation_profile(const FamilySpec& F, const ParamGrid& grid, const SymbolFn& omega,
                                          const SymbolFn& tau, double tol, unsigned jobs = 1);
/// Rejects words that share their first symbol.
SeparationProfile pair_separation_profile(const FamilySpec& F, const ParamGrid& grid, const CodedWord& omega,
                                          const CodedWord& tau, double tol, unsigned jobs = 1);

struct C1Row {
    double r = 0.0;
    double measure = 0.0;  // max over pairs
    double ratio = 0.0;    // measure / r
};

struct C2Row {
    double r = 0.0;
    std::size_t cover_count = 0;  // max over pairs
    double normalized = 0.0;      // cover_count * r^(d-1)
};

struct TransversalityReport {
    std::size_t pairs_tested = 0;
    std::size_t sampled_pairs = 0;
    std::size_t adversarial_pairs = 0;
    std::vector<std::size_t> grid_counts;
    std::size_t d = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::vector<C1Row> c1;
    std::vector<C2Row> c2;
    double C1_hat = 0.0;
    double C2_hat = 0.0;
    bool C1_stable = true;
    bool C2_stable = true;
    std::vector<std::string> warnings;
};

struct TransversalityOptions {
    std::size_t n_pairs = 64;
    std::vector<double> r_list;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    /// Symbols 1..k enter the fixed-point adversarial set.
    Symbol adversarial_symbols = 4;
    unsigned jobs = 1;
};

/// Fills both the C1 and the C2 tables from sampled and adversarial pairs.
TransversalityReport transversality_report(const FamilySpec& F, const BernoulliSpec& mu, const ParamGrid& grid,
                                           const TransversalityOptions& opt);

TransversalityReport estimate_C1(const FamilySpec& F, const BernoulliSpec& mu, std::size_t n_pairs,
                                 const std::vector<double>& r_list, const ParamGrid& grid, double tol,
                                 std::uint64_t seed, unsigned jobs = 1);
TransversalityReport estimate_C2(const FamilySpec& F, const BernoulliSpec& mu, std::size_t n_pairs,
                                 const std::vector<double>& r_list, const ParamGrid& grid, double tol,
                                 std::uint64_t seed, unsigned jobs = 1);

/// Same reductions over precomputed separation fields, one per pair.
TransversalityReport analyze_fields(const std::vector<std::vector<double>>& fields, const ParamGrid& grid,
                                    const std::vector<double>& r_list);

/// Lebesgue estimate of {t : f(t) <= r}.
double sublevel_measure(const std::vector<double>& f, const ParamGrid& grid, double r);
/// Number of side-r cubes covering the grid points with f(t) <= r.
std::size_t sublevel_cover(const std::vector<double>& f, const ParamGrid& grid, double r);

void write_transversality_csv(std::ostream& os, const TransversalityReport& rep);
std::string transversality_summary(const TransversalityReport& rep);

} // namespace pifs
