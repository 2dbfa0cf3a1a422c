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

#include "pifs/empirical_dim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace pifs {

namespace {

void check_scales(const std::vector<double>& scales) {
    if (scales.empty()) throw std::invalid_argument("empty scale list");
    for (std::size_t k = 0; k < scales.size(); ++k) {
        if (!(scales[k] > 0.0) || !std::isfinite(scales[k]))
            throw std::invalid_argument("scales must be positive and finite");
        if (k > 0 && !(scales[k] < scales[k - 1]))
            throw std::invalid_argument("scales must be strictly decreasing");
    }
}

// Least squares of y on x.
ScalingFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    ScalingFit f;
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (syy == 0.0) {
        f.degenerate = true;
        f.slope = 0.0;
        f.intercept = my;
        f.r_squared = 0.0;
        return f;
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return f;
}

void set_range(ScalingFit& f) {
    f.r_min = f.pairs.front().first;
    f.r_max = f.pairs.front().first;
    for (const auto& [r, v] : f.pairs) {
        f.r_min = std::min(f.r_min, r);
        f.r_max = std::max(f.r_max, r);
    }
}

} // namespace

std::vector<std::pair<double, std::size_t>> box_count(const PointCloud& cloud, const IntervalDomain& X,
                                                      const std::vector<double>& scales) {
    check_scales(scales);
    const double rmin = scales.back();
    if (cloud.max_err() >= rmin / 10.0)
        throw ResolutionError("point errors " + format_number(cloud.max_err()) +
                              " not below min scale / 10 = " + format_number(rmin / 10.0));
    std::vector<double> xs;
    xs.reserve(cloud.points.size());
    for (const auto& p : cloud.points) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());

    std::vector<std::pair<double, std::size_t>> out;
    out.reserve(scales.size());
    const double a = X.a;
    for (double r : scales) {
        const double last_cell = std::max(0.0, std::ceil(X.width() / r) - 1.0);
        std::size_t count = 0;
        double prev = -1.0;
        // Sorted input makes cell indices nondecreasing, so distinct cells are runs.
        for (double x : xs) {
            const double cell = std::clamp(std::floor((x - a) / r), 0.0, last_cell);
            if (cell != prev) {
                ++count;
                prev = cell;
            }
        }
        out.emplace_back(r, count);
    }
    return out;
}

ScalingFit fit_dimension(const ScalePairs& pairs) {
    if (pairs.size() < 4) throw std::invalid_argument("fit needs at least 4 scales");
    std::vector<double> x, y;
    for (const auto& [r, n] : pairs) {
        if (!(r > 0.0)) throw std::invalid_argument("scales must be positive");
        if (!(n >= 1.0)) throw std::invalid_argument("counts must be at least 1");
        x.push_back(-std::log(r));
        y.push_back(std::log(n));
    }
    ScalingFit f = linear_fit(x, y);
    f.pairs = pairs;
    set_range(f);
    if (f.degenerate) f.warnings.push_back("all counts equal");
    return f;
}

ScalingFit local_dim_measure(const PointCloud& cloud, const std::vector<double>& radii,
                             std::size_t max_centers) {
    constexpr std::size_t kMinCloud = 10'000;
    if (cloud.points.size() < kMinCloud) throw std::invalid_argument("local dimension needs at least 10^4 points");
    if (max_centers == 0) throw std::invalid_argument("max_centers must be positive");
    check_scales(radii);

    std::vector<CloudPoint> pts = cloud.points;
    std::sort(pts.begin(), pts.end(), [](const CloudPoint& l, const CloudPoint& r) { return l.x < r.x; });
    const std::size_t N = pts.size();
    std::vector<double> xs(N), prefix(N + 1, 0.0);
    for (std::size_t k = 0; k < N; ++k) {
        xs[k] = pts[k].x;
        prefix[k + 1] = prefix[k] + pts[k].weight;
    }
    const double total = prefix[N];

    const std::size_t C = std::min(max_centers, N);
    std::vector<std::size_t> centers(C);
    for (std::size_t c = 0; c < C; ++c) centers[c] = (2 * c + 1) * N / (2 * C);

    ScalingFit f;
    std::vector<double> x, y;
    if (cloud.max_err() >= radii.back() / 10.0)
        f.warnings.push_back("point errors exceed min radius / 10");
    for (double r : radii) {
        double sum_log = 0.0;
        std::size_t used = 0;
        for (std::size_t c : centers) {
            const double xc = xs[c];
            const auto lo = std::lower_bound(xs.begin(), xs.end(), xc - r) - xs.begin();
            const auto hi = std::upper_bound(xs.begin(), xs.end(), xc + r) - xs.begin();
            const double own = pts[c].weight;
            const double m = (prefix[hi] - prefix[lo] - own) / (total - own);
            if (m > 0.0) {
                sum_log += std::log(m);
                ++used;
            }
        }
        if (2 * used < C) {
            f.warnings.push_back("scale r=" + format_number(r) + " dropped: more than half of the windows empty");
            continue;
        }
        const double mean_log = sum_log / static_cast<double>(used);
        f.pairs.emplace_back(r, std::exp(mean_log));
        x.push_back(std::log(r));
        y.push_back(mean_log);
    }
    if (f.pairs.size() < 4) throw std::invalid_argument("fewer than 4 usable radii for local dimension");
    ScalingFit g = linear_fit(x, y);
    g.pairs = std::move(f.pairs);
    g.warnings = std::move(f.warnings);
    set_range(g);
    if (g.degenerate) g.warnings.push_back("all window masses equal");
    return g;
}

std::vector<double> auto_scales(const PointCloud& cloud, const IntervalDomain& X, double ratio,
                                std::size_t max_scales) {
    if (!(ratio > 1.0)) throw std::invalid_argument("scale ratio must exceed 1");
    const double floor_r = 10.0 * cloud.max_err();
    std::vector<double> out;
    double r = X.width() / 16.0;
    while (r > floor_r && out.size() < max_scales) {
        out.push_back(r);
        r /= ratio;
    }
    if (out.size() < 4) throw ResolutionError("fewer than 4 certified scales in [10 max err, |X|/16]");
    return out;
}

void write_fit_csv(std::ostream& os, const ScalingFit& fit, const std::string& value_name) {
    os << "# slope=" << format_number(fit.slope) << " intercept=" << format_number(fit.intercept)
       << " r_squared=" << format_number(fit.r_squared) << " r_min=" << format_number(fit.r_min)
       << " r_max=" << format_number(fit.r_max) << " degenerate=" << (fit.degenerate ? 1 : 0) << '\n';
    os << "r," << value_name << '\n';
    for (const auto& [r, v] : fit.pairs) os << format_number(r) << ',' << format_number(v) << '\n';
}

} // namespace pifs
