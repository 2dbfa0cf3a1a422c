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

#include <array>
#include <cstdint>

namespace pifs {

/// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
/// Output is a pure function of (key, counter), so draws can be addressed
/// directly by index and are independent of evaluation order.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key);
};

/// A reproducible uniform stream identified by (seed, stream id). Draw j of a
/// stream is always the same double in (0, 1), regardless of which other
/// draws or streams were evaluated first.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {}

    double uniform(std::uint64_t draw) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

/// Stream purposes; each estimator draws from its own family of streams.
enum class Purpose : std::uint64_t {
    Attractor = 1,
    LyapunovMC = 2,
    LyapunovSeries = 3,
    Birkhoff = 4,
    TransversalityPairs = 5,
    Words = 6,
};

/// Derives an independent seed for a named purpose from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose, std::uint64_t index = 0);

inline std::uint64_t derive_seed(std::uint64_t master, Purpose purpose, std::uint64_t index = 0) {
    return derive_seed(master, static_cast<std::uint64_t>(purpose), index);
}

/// FNV-1a 64-bit hash of a byte string (config and artifact fingerprints).
std::uint64_t fnv1a64(const void* data, std::size_t size);

} // namespace pifs
