/*
 *    Copyright 2026 The hmmu Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "doctest.h"
#include "oracles.hpp"

#include "hmmu/error.hpp"
#include "hmmu/mmu.hpp"
#include "hmmu/rng.hpp"

using namespace hmmu;

namespace {

TlbConfig shape(std::uint32_t entries, std::uint32_t ways) { return {entries, ways, 1.0, 1.0, 0.01}; }

}  // namespace

TEST_CASE("vpn_of shifts by the 4KB page offset") {
    CHECK(vpn_of(0x0) == 0);
    CHECK(vpn_of(0x1FFF) == 1);
    CHECK(vpn_of(0x1000) == 1);
    CHECK(vpn_of(0xFFFFFFFFF000ULL) == 0xFFFFFFFFFULL);
    CHECK_THROWS_AS(vpn_of(Addr{1} << 48), DataError);
}

TEST_CASE("empty TLB misses") {
    Tlb tlb(shape(16, 4));
    CHECK(tlb.lookup(123) == TlbResult::Miss);
}

TEST_CASE("fill then lookup hits") {
    Tlb tlb(shape(16, 4));
    CHECK_FALSE(tlb.fill(5).has_value());
    CHECK(tlb.lookup(5) == TlbResult::Hit);
}

TEST_CASE("two-way single-set LRU evicts the oldest") {
    Tlb tlb(shape(2, 2));
    tlb.fill(1);
    tlb.fill(2);
    const auto victim = tlb.fill(3);
    REQUIRE(victim.has_value());
    CHECK(*victim == 1);
    CHECK(tlb.lookup(1) == TlbResult::Miss);
    CHECK(tlb.lookup(2) == TlbResult::Hit);
}

TEST_CASE("a hit refreshes recency") {
    Tlb tlb(shape(2, 2));
    tlb.fill(2);
    tlb.fill(1);  // set is {1 (MRU), 2 (LRU)}
    CHECK(tlb.set_contents(0) == std::vector<Vpn>{1, 2});
    CHECK(tlb.fill(3) == std::optional<Vpn>{2});
    tlb.lookup(1);
    CHECK(tlb.set_contents(0) == std::vector<Vpn>{1, 3});
    tlb.lookup(3);
    CHECK(tlb.set_contents(0) == std::vector<Vpn>{3, 1});
}

TEST_CASE("a miss leaves the state unchanged") {
    Tlb tlb(shape(4, 2));
    tlb.fill(0);
    tlb.fill(2);
    const auto before = tlb.set_contents(0);
    CHECK(tlb.lookup(4) == TlbResult::Miss);
    CHECK(tlb.set_contents(0) == before);
}

TEST_CASE("set index is vpn modulo set count") {
    Tlb tlb(shape(8, 2));  // 4 sets
    tlb.fill(1);
    tlb.fill(5);
    tlb.fill(9);  // all map to set 1
    CHECK(tlb.set_contents(1) == std::vector<Vpn>{9, 5});
    CHECK(tlb.set_contents(0).empty());
}

TEST_CASE("TLB geometry is validated") {
    CHECK_THROWS_AS(Tlb(shape(12, 4)), DataError);  // 3 sets
    CHECK_THROWS_AS(Tlb(shape(10, 4)), DataError);  // not divisible
    CHECK_THROWS_AS(Tlb(shape(0, 1)), DataError);
    CHECK_NOTHROW(Tlb(shape(64, 64)));             // fully associative
}

TEST_CASE("hit/miss sequence matches the list-based LRU reference") {
    Xorshift64Star rng(77);
    const std::uint32_t shapes[][2] = {{1, 1}, {2, 2}, {4, 1}, {8, 2}, {16, 4}, {32, 2}, {64, 4}, {64, 8}, {16, 16}};
    for (int iter = 0; iter < 300; ++iter) {
        const auto* s = shapes[rng.below(std::size(shapes))];
        Tlb tlb(shape(s[0], s[1]));
        oracle::LruTlb ref(s[0], s[1]);
        const auto universe = 1 + rng.below(3 * s[0]);
        for (int k = 0; k < 300; ++k) {
            const auto vpn = rng.below(universe);
            const bool hit = tlb.lookup(vpn) == TlbResult::Hit;
            REQUIRE(hit == ref.access(vpn));
            if (!hit) {
                std::uint64_t ref_victim = 0;
                const bool ref_evicted = ref.insert(vpn, ref_victim);
                const auto victim = tlb.fill(vpn);
                REQUIRE(victim.has_value() == ref_evicted);
                if (victim) CHECK(*victim == ref_victim);
            }
        }
    }
}
