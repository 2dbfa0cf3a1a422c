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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pifs/ifs_core.hpp"
#include "pifs/projection.hpp"

namespace pifs {

/// Raised when cloud point errors are too large for the requested scales.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ScalePairs = std::vector<std::pair<double, double>>;

struct ScalingFit {
    /// (r, count) for box counts, (r, geometric-mean mass) for local dimension.
    ScalePairs pairs;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
    /// All values equal, so the slope is 0 by convention.
    bool degenerate = false;
    std::vector<std::string> warnings;
};

/// Occupied cells of side r on the grid anchored at X.a, for each r.
/// Scales must be positive and strictly decreasing, and every point error
/// must be below min(scales) / 10.
std::vector<std::pair<double, std::size_t>> box_count(const PointCloud& cloud, const IntervalDomain& X,
                                                      const std::vector<double>& scales);

/// Least-squares slope of log N against log(1/r). Needs at least 4 pairs.
ScalingFit fit_dimension(const ScalePairs& pairs);

/// Mean log of the empirical mass of [x - r, x + r] over up to max_centers
/// centers taken at evenly spaced ranks of the sorted cloud. The center's
/// own weight is excluded. Slope of mean log mass against log r.
ScalingFit local_dim_measure(const PointCloud& cloud, const std::vector<double>& radii,
                             std::size_t max_centers = 4096);

/// Geometric scales |X|/16 * ratio^-k kept above 10 * max point error, at
/// most max_scales of them.
std::vector<double> auto_scales(const PointCloud& cloud, const IntervalDomain& X, double ratio = 2.0,
                                std::size_t max_scales = 12);

/// "r,value" rows preceded by a "# slope=..." summary line.
void write_fit_csv(std::ostream& os, const ScalingFit& fit, const std::string& value_name);

} // namespace pifs
