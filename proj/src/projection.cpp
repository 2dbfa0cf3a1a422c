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

#include "pifs/projection.hpp"

#include <charconv>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "pifs/parallel.hpp"
#include "pifs/random.hpp"

namespace pifs {

namespace {

// Map lookups along a word: cached maps by pointer, others owned here.
class MapTape {
public:
    explicit MapTape(const SystemSpec& S) : S_(S) {}

    void push(Symbol i) {
        if (const MapSpec* m = S_.cached(i)) {
            tape_.push_back(m);
        } else {
            owned_.push_back(S_.map(i));
            tape_.push_back(&owned_.back());
        }
    }
    std::size_t size() const { return tape_.size(); }

    // Image of X under the composition of the first k maps.
    std::pair<double, double> image(std::size_t k) const {
        double lo = S_.domain().a;
        double hi = S_.domain().b;
        for (std::size_t j = k; j-- > 0;) std::tie(lo, hi) = tape_[j]->image(lo, hi);
        return {lo, hi};
    }

private:
    const SystemSpec& S_;
    std::vector<const MapSpec*> tape_;
    std::deque<MapSpec> owned_;
};

ProjectedPoint finish(std::pair<double, double> iv, std::size_t depth, bool truncated) {
    const double width = iv.second - iv.first;
    return {0.5 * (iv.first + iv.second), 0.5 * width, depth, truncated};
}

// Doubling-depth search for a depth whose image is narrower than tol.
template <class Next>
ProjectedPoint project_impl(const SystemSpec& S, Next&& next, std::size_t length_limit, bool limit_is_cap,
                            double tol) {
    if (!(tol > 0.0)) throw std::domain_error("project: tol must be > 0");
    MapTape tape(S);
    if (length_limit == 0) return finish({S.domain().a, S.domain().b}, 0, limit_is_cap);
    std::size_t k = std::min<std::size_t>(16, length_limit);
    for (;;) {
        while (tape.size() < k) tape.push(next(tape.size()));
        const auto iv = tape.image(k);
        if (iv.second - iv.first < tol) return finish(iv, k, false);
        if (k == length_limit) return finish(iv, k, limit_is_cap);
        k = std::min(2 * k, length_limit);
    }
}

void append_list(std::ostream& os, const std::vector<double>& v) {
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ";" : "") << format_number(v[k]);
}

} // namespace

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
    return std::string(buf, ptr);
}

std::string CodedWord::to_string() const {
    std::string s = prefix.empty() ? "" : prefix.to_string();
    if (!cycle.empty()) s += "(" + cycle.to_string() + ")^inf";
    return s.empty() ? "()" : s;
}

std::pair<double, double> image_interval(const SystemSpec& S, const Word& w) {
    MapTape tape(S);
    for (Symbol s : w) tape.push(s);
    return tape.image(w.size());
}

ProjectedPoint project(const SystemSpec& S, const Word& w, double tol) {
    return project_impl(S, [&](std::size_t k) { return w[k]; }, w.size(), false, tol);
}

ProjectedPoint project(const SystemSpec& S, const CodedWord& w, double tol, std::size_t depth_cap) {
    if (!w.infinite()) return project(S, w.prefix, tol);
    return project_impl(S, [&](std::size_t k) { return w(k); }, depth_cap, true, tol);
}

ProjectedPoint project(const SystemSpec& S, const SymbolFn& omega, double tol, std::size_t depth_cap) {
    return project_impl(S, omega, depth_cap, true, tol);
}

SymbolFn measure_word(const BernoulliSpec& mu, std::uint64_t seed, std::uint64_t stream_id,
                      std::size_t offset) {
    const CounterStream stream(seed, stream_id);
    return [&mu, stream, offset](std::size_t k) { return mu.sample(stream.uniform(k + offset)); };
}

double PointCloud::max_err() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, p.err);
    return m;
}

double PointCloud::total_weight() const {
    std::vector<double> w(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) w[k] = points[k].weight;
    return pairwise_sum(w);
}

PointCloud sample_attractor(const SystemSpec& S, const BernoulliSpec& mu, std::size_t N, double tol,
                            std::uint64_t seed, unsigned jobs, std::size_t depth_cap) {
    if (N < 1) throw std::domain_error("sample_attractor: N must be >= 1");
    PointCloud cloud;
    cloud.points.resize(N);
    std::vector<unsigned char> truncated(N, 0);
    const std::uint64_t base = derive_seed(seed, Purpose::Attractor);
    const double weight = 1.0 / static_cast<double>(N);
    parallel_for(N, jobs, [&](std::size_t j) {
        const auto p = project(S, measure_word(mu, base, j), tol, depth_cap);
        cloud.points[j] = {p.x, weight, p.err};
        truncated[j] = p.truncated;
    });
    for (auto t : truncated) cloud.truncated += t;
    cloud.provenance.system_id = S.id();
    cloud.provenance.seed = seed;
    cloud.provenance.tol = tol;
    return cloud;
}

std::vector<double> pushforward_histogram(const PointCloud& cloud, const IntervalDomain& X,
                                          std::size_t bins) {
    if (bins < 2) throw std::domain_error("pushforward_histogram: bins must be >= 2");
    std::vector<double> h(bins, 0.0);
    const double scale = static_cast<double>(bins) / X.width();
    for (const auto& p : cloud.points) {
        const double pos = std::floor((p.x - X.a) * scale);
        const std::size_t idx =
            pos <= 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
        h[idx] += p.weight;
    }
    return h;
}

void write_cloud_csv(std::ostream& os, const PointCloud& cloud) {
    const auto& pv = cloud.provenance;
    os << "# system=" << pv.system_id << " measure=" << pv.measure_id << " t=";
    append_list(os, pv.t);
    os << " seed=" << pv.seed << " tol=" << format_number(pv.tol) << '\n';
    os << "x,weight,err\n";
    for (const auto& p : cloud.points)
        os << format_number(p.x) << ',' << format_number(p.weight) << ',' << format_number(p.err) << '\n';
}

PointCloud read_cloud_csv(std::istream& is) {
    PointCloud cloud;
    std::string line;
    bool header = false;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream fields(line.substr(1));
            std::string kv;
            while (fields >> kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = kv.substr(0, eq);
                const std::string val = kv.substr(eq + 1);
                if (key == "system") cloud.provenance.system_id = val;
                else if (key == "measure") cloud.provenance.measure_id = val;
                else if (key == "seed") cloud.provenance.seed = std::stoull(val);
                else if (key == "tol") cloud.provenance.tol = std::stod(val);
                else if (key == "t") {
                    std::istringstream ts(val);
                    std::string item;
                    while (std::getline(ts, item, ';'))
                        if (!item.empty()) cloud.provenance.t.push_back(std::stod(item));
                }
            }
            continue;
        }
        if (!header) {
            if (line != "x,weight,err")
                throw std::runtime_error("cloud CSV line " + std::to_string(line_no) +
                                         ": expected header 'x,weight,err'");
            header = true;
            continue;
        }
        CloudPoint p;
        const char* first = line.data();
        const char* last = line.data() + line.size();
        double* slots[3] = {&p.x, &p.weight, &p.err};
        for (int c = 0; c < 3; ++c) {
            const auto [ptr, ec] = std::from_chars(first, last, *slots[c]);
            if (ec != std::errc() || (c < 2 && (ptr == last || *ptr != ',')) || (c == 2 && ptr != last))
                throw std::runtime_error("cloud CSV line " + std::to_string(line_no) + ": malformed row");
            first = ptr + 1;
        }
        cloud.points.push_back(p);
    }
    if (!header) throw std::runtime_error("cloud CSV: missing header");
    return cloud;
}

} // namespace pifs
