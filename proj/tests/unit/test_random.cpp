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

#include "doctest.h"

#include <cmath>
#include <vector>

#include "pifs/parallel.hpp"
#include "pifs/random.hpp"

using namespace pifs;

TEST_CASE("philox4x32-10 known-answer vectors") {
    auto zero = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(zero == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

    auto ones = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                  {0xffffffffu, 0xffffffffu});
    CHECK(ones == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

    auto pi = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                {0xa4093822u, 0x299f31d0u});
    CHECK(pi == Philox4x32::Counter{0xd16cfe09u, 0x94fdcceb, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter stream draws are addressable and in the open unit interval") {
    CounterStream s(42, 7);
    std::vector<double> forward, backward(1000);
    for (std::uint64_t j = 0; j < 1000; ++j) forward.push_back(s.uniform(j));
    for (std::uint64_t j = 1000; j-- > 0;) backward[j] = s.uniform(j);
    CHECK(forward == backward);
    double mean = 0.0;
    for (double u : forward) {
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        mean += u / 1000.0;
    }
    CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / 1000.0));
    CHECK(CounterStream(42, 8).uniform(0) != s.uniform(0));
    CHECK(CounterStream(43, 7).uniform(0) != s.uniform(0));
}

TEST_CASE("derived seeds differ by purpose and index") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
}

TEST_CASE("parallel_for results do not depend on the job count") {
    std::vector<double> a(10007), b(10007);
    auto fill = [](std::vector<double>& v) {
        return [&v](std::size_t i) { v[i] = CounterStream(5, i).uniform(0); };
    };
    parallel_for(a.size(), 1, fill(a));
    parallel_for(b.size(), 8, fill(b));
    CHECK(a == b);
    CHECK(pairwise_sum(a) == pairwise_sum(b));
}

TEST_CASE("pairwise sum is exact on small integers") {
    std::vector<double> v(100000, 1.0);
    CHECK(pairwise_sum(v) == 100000.0);
}
