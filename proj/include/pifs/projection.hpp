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
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pifs/ifs_core.hpp"
#include "pifs/symbolic_measures.hpp"

namespace pifs {

inline constexpr std::size_t kDefaultDepthCap = 1'000'000;

/// A point of the attractor with a certified bound |x - pi(omega)| <= err.
struct ProjectedPoint {
    double x = 0.0;
    double err = 0.0;
    std::size_t depth = 0;
    /// Set when the depth cap stopped composition before err < tol / 2.
    bool truncated = false;
};

/// Lazy symbol source: omega(k) is the (k+1)-th symbol.
using SymbolFn = std::function<Symbol(std::size_t)>;

/// Eventually periodic word prefix . cycle^infinity; finite when cycle is empty.
struct CodedWord {
    Word prefix;
    Word cycle;

    bool infinite() const { return !cycle.empty(); }
    std::size_t finite_length() const { return prefix.size(); }
    Symbol operator()(std::size_t k) const {
        return k < prefix.size() ? prefix[k] : cycle[(k - prefix.size()) % cycle.size()];
    }
    std::string to_string() const;
};

/// s_w(X) as an interval, composing endpoint images inside out.
std::pair<double, double> image_interval(const SystemSpec& S, const Word& w);

/// Composes s_{w_1} o ... o s_{w_k} on X until the image is narrower than tol
/// or the word ends; returns the midpoint with err = width / 2.
ProjectedPoint project(const SystemSpec& S, const Word& w, double tol);
ProjectedPoint project(const SystemSpec& S, const CodedWord& w, double tol,
                       std::size_t depth_cap = kDefaultDepthCap);
ProjectedPoint project(const SystemSpec& S, const SymbolFn& omega, double tol,
                       std::size_t depth_cap = kDefaultDepthCap);

/// Symbol stream of i.i.d. draws from mu, addressed by (seed, stream id, k).
SymbolFn measure_word(const BernoulliSpec& mu, std::uint64_t seed, std::uint64_t stream_id,
                      std::size_t offset = 0);

struct CloudPoint {
    double x = 0.0;
    double weight = 0.0;
    double err = 0.0;
};

struct CloudProvenance {
    std::string system_id;
    std::string measure_id;
    std::vector<double> t;
    std::uint64_t seed = 0;
    double tol = 0.0;
};

/// Weighted samples of the projected measure.
struct PointCloud {
    std::vector<CloudPoint> points;
    CloudProvenance provenance;
    std::size_t truncated = 0;

    double max_err() const;
    double total_weight() const;
};

/// N i.i.d. words from mu, each projected to tol, with weights 1/N.
PointCloud sample_attractor(const SystemSpec& S, const BernoulliSpec& mu, std::size_t N, double tol,
                            std::uint64_t seed, unsigned jobs = 1,
                            std::size_t depth_cap = kDefaultDepthCap);

/// Bin masses over X; bin width |X| / bins, points at b fall in the last bin.
std::vector<double> pushforward_histogram(const PointCloud& cloud, const IntervalDomain& X,
                                          std::size_t bins);

/// CSV with a leading '#' provenance line and columns x, weight, err.
void write_cloud_csv(std::ostream& os, const PointCloud& cloud);
PointCloud read_cloud_csv(std::istream& is);

/// Shortest round-trip decimal form, used for every CSV number.
std::string format_number(double v);

} // namespace pifs
