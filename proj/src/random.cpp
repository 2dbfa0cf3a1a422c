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

#include "pifs/random.hpp"
#include "pifs/parallel.hpp"

namespace pifs {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(Philox4x32::Counter& ctr, const Philox4x32::Key& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

} // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
    philox_round(ctr, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
        philox_round(ctr, key);
    }
    return ctr;
}

double CounterStream::uniform(std::uint64_t draw) const {
    const std::uint64_t blk = draw >> 1;
    const Philox4x32::Counter ctr = {
        static_cast<std::uint32_t>(blk), static_cast<std::uint32_t>(blk >> 32),
        static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
    const Philox4x32::Key key = {static_cast<std::uint32_t>(seed_),
                                 static_cast<std::uint32_t>(seed_ >> 32)};
    const auto out = Philox4x32::block(ctr, key);
    const std::uint32_t a = (draw & 1u) ? out[2] : out[0];
    const std::uint32_t b = (draw & 1u) ? out[3] : out[1];
    // 53 random bits, shifted by half an ulp so the result lies in (0, 1).
    const std::uint64_t bits = (static_cast<std::uint64_t>(a >> 5) << 26) | (b >> 6);
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose, std::uint64_t index) {
    const Philox4x32::Counter ctr = {
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
        static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(purpose >> 32) ^ 0x5eedu};
    const Philox4x32::Key key = {static_cast<std::uint32_t>(master),
                                 static_cast<std::uint32_t>(master >> 32)};
    const auto out = Philox4x32::block(ctr, key);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

double pairwise_sum(const double* data, std::size_t n) {
    constexpr std::size_t kBlock = 256;
    if (n <= kBlock) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    // Split at a multiple of the block size so the tree shape is fixed by n.
    std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::size_t half = (blocks / 2) * kBlock;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

} // namespace pifs
