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
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"

#include "hmmu/error.hpp"
#include "hmmu/mmu.hpp"
#include "hmmu/rng.hpp"

using namespace hmmu;

namespace {

constexpr double kWalk = 100.0;

PtwConfig walker(std::uint32_t threads, double latency = kWalk, double pte_pj = 10.0) {
    return {threads, latency, pte_pj, 0.05};
}

MmuConfig ptw_only(std::uint32_t threads) { return {"ptw", std::nullopt, std::nullopt, walker(threads)}; }

MmuConfig with_l1(std::uint32_t threads, std::uint32_t entries = 16, std::uint32_t ways = 4) {
    return {"l1", TlbConfig{entries, ways, 1.0, 2.0, 0.01}, std::nullopt, walker(threads)};
}

MmuConfig with_l1_l2(std::uint32_t threads) {
    return {"l1l2", TlbConfig{16, 4, 1.0, 2.0, 0.01}, TlbConfig{64, 4, 3.0, 5.0, 0.04}, walker(threads)};
}

std::vector<TimedRef> random_refs(Xorshift64Star& rng, std::size_t n, std::uint64_t universe, double spacing) {
    std::vector<TimedRef> refs;
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        refs.push_back({rng.below(universe), t});
        t += spacing * static_cast<double>(rng.below(4));
    }
    return refs;
}

}  // namespace

TEST_CASE("walk_cost charges four PTE fetches") {
    const auto c = walk_cost(walker(1, 100.0, 10.0));
    CHECK(c.latency_ns == 100.0);
    CHECK(c.energy_pj == 40.0);
    const auto z = walk_cost(walker(1, 55.0, 0.0));
    CHECK(z.latency_ns == 55.0);
    CHECK(z.energy_pj == 0.0);
}

TEST_CASE("two walks accumulate eight PTE fetches of energy") {
    const std::vector<TimedRef> refs{{1, 0.0}, {2, 0.0}};
    const auto s = simulate_local(refs, ptw_only(1));
    CHECK(s.walks == 2);
    CHECK(s.mmu_energy_pj == 80.0);
}

TEST_CASE("identical vpns: one walk, the rest L1 hits") {
    std::vector<TimedRef> refs(50, TimedRef{42, 0.0});
    for (std::size_t i = 0; i < refs.size(); ++i) refs[i].issue_ns = static_cast<double>(i);
    const auto s = simulate_local(refs, with_l1(1));
    CHECK(s.walks == 1);
    CHECK(s.l1_hits == 49);
    CHECK(s.refs == 50);
}

TEST_CASE("serial walker queues simultaneous misses") {
    const std::vector<TimedRef> refs{{1, 0.0}, {2, 0.0}};
    LocalMmu mmu(ptw_only(1));
    CHECK(mmu.translate(1, 0.0).latency_ns == kWalk);
    CHECK(mmu.translate(2, 0.0).latency_ns == 2 * kWalk);
    CHECK(simulate_local(refs, ptw_only(1)).mmu_time_ns == 3 * kWalk);
}

TEST_CASE("two walkers overlap simultaneous misses") {
    LocalMmu mmu(ptw_only(2));
    CHECK(mmu.translate(1, 0.0).latency_ns == kWalk);
    CHECK(mmu.translate(2, 0.0).latency_ns == kWalk);
}

TEST_CASE("probe times are charged at each level") {
    LocalMmu mmu(with_l1_l2(1));
    auto t = mmu.translate(9, 0.0);
    CHECK(t.level == HitLevel::Walk);
    CHECK(t.latency_ns == 1.0 + 3.0 + kWalk);
    t = mmu.translate(9, 500.0);
    CHECK(t.level == HitLevel::L1);
    CHECK(t.latency_ns == 1.0);
    CHECK(mmu.stats().mmu_energy_pj == 2.0 + 5.0 + 40.0 + 2.0);
}

TEST_CASE("an L2 hit refills L1") {
    // L1: 1 set x 1 way, L2 larger.
    MmuConfig cfg{"x", TlbConfig{1, 1, 1.0, 0.0, 0.0}, TlbConfig{8, 4, 2.0, 0.0, 0.0}, walker(1)};
    LocalMmu mmu(cfg);
    mmu.translate(1, 0.0);
    mmu.translate(2, 0.0);  // evicts 1 from L1, L2 keeps both
    CHECK(mmu.translate(1, 1000.0).level == HitLevel::L2);
    CHECK(mmu.translate(1, 1000.0).level == HitLevel::L1);
}

TEST_CASE("walker rejects out-of-order issue times") {
    WalkScheduler w(2, 10.0);
    w.schedule(5.0);
    CHECK_THROWS_AS(w.schedule(4.0), DataError);
}

TEST_CASE("per-walk latencies match an event-driven multi-server queue") {
    Xorshift64Star rng(5);
    for (int iter = 0; iter < 100; ++iter) {
        const unsigned servers = 1u << rng.below(6);
        std::vector<double> arrivals;
        double t = 0.0;
        for (int k = 0; k < 60; ++k) {
            arrivals.push_back(t);
            t += static_cast<double>(rng.below(40));
        }
        WalkScheduler w(servers, kWalk);
        const auto expected = oracle::multi_server_latencies(arrivals, servers, kWalk);
        for (std::size_t k = 0; k < arrivals.size(); ++k) CHECK(w.schedule(arrivals[k]) == expected[k]);
    }
}

TEST_CASE("local MMU properties on random streams") {
    Xorshift64Star rng(8);
    for (int iter = 0; iter < 100; ++iter) {
        const auto refs = random_refs(rng, 400, 1 + rng.below(200), 5.0);
        for (const auto& base : {ptw_only(1), with_l1(1), with_l1_l2(1)}) {
            double last = 1e300;
            for (std::uint32_t w : {1u, 2u, 4u, 8u, 16u, 32u}) {
                auto cfg = base;
                cfg.ptw.threads = w;
                const auto s = simulate_local(refs, cfg);
                CHECK(s.l1_hits + s.l2_hits + s.walks == s.refs);
                CHECK(s.mmu_time_ns <= last);
                last = s.mmu_time_ns;
                CHECK(s == simulate_local(refs, cfg));
            }
        }
        const auto bare = simulate_local(refs, ptw_only(4)).walks;
        CHECK(simulate_local(refs, with_l1(4, 16, 4)).walks <= bare);
        CHECK(simulate_local(refs, with_l1(4, 1, 1)).walks <= bare);
        CHECK(simulate_local(refs, with_l1_l2(4)).walks <= bare);
    }
}

TEST_CASE("with one walker and equal issue times the walker is busy walks x latency") {
    Xorshift64Star rng(3);
    std::vector<TimedRef> refs;
    for (int k = 0; k < 100; ++k) refs.push_back({rng.below(500), 0.0});
    LocalMmu mmu(with_l1(1));
    double finish = 0.0;
    for (const auto& r : refs) {
        const auto t = mmu.translate(r.vpn, r.issue_ns);
        if (t.level == HitLevel::Walk) finish = std::max(finish, t.latency_ns - 1.0);
    }
    CHECK(finish == static_cast<double>(mmu.stats().walks) * kWalk);
}

TEST_CASE("blocking requester never queues walks") {
    const std::vector<Vpn> vpns{1, 2, 3, 4};
    LocalMmu mmu(ptw_only(1));
    const auto s = mmu.run_blocking(vpns);
    CHECK(s.walks == 4);
    CHECK(s.mmu_time_ns == 4 * kWalk);
}

TEST_CASE("TLB state persists across segments") {
    LocalMmu mmu(with_l1(1));
    const std::vector<TimedRef> seg{{7, 0.0}};
    CHECK(mmu.run_segment(seg).walks == 1);
    CHECK(mmu.run_segment(seg).l1_hits == 1);
    CHECK(mmu.stats().refs == 2);
}

TEST_CASE("L2 without L1 is rejected") {
    MmuConfig cfg{"bad", std::nullopt, TlbConfig{64, 4, 1, 1, 1}, walker(1)};
    CHECK_THROWS_AS(LocalMmu{cfg}, DataError);
}

namespace {

TlbConfig cpu_l2_shape(double access = 2.0) { return {64, 4, access, 3.0, 0.05}; }

}  // namespace

TEST_CASE("remote probe without an accelerator MMU, CPU L2 hit") {
    Tlb cpu_l2(cpu_l2_shape(2.0));
    cpu_l2.fill(5);
    const std::vector<Vpn> vpns{5};
    const auto s = simulate_remote(vpns, RemoteNoMmu{1.0}, cpu_l2, walker(1));
    CHECK(s.mmu_time_ns == 4.0);
    CHECK(s.remote_probes == 1);
    CHECK(s.l2_hits == 1);
}

TEST_CASE("remote probe, CPU L2 miss pays the CPU walk") {
    Tlb cpu_l2(cpu_l2_shape(2.0));
    const std::vector<Vpn> vpns{5};
    const auto s = simulate_remote(vpns, RemoteNoMmu{10.0}, cpu_l2, walker(1, 100.0));
    CHECK(s.mmu_time_ns == 122.0);
    CHECK(s.walks == 1);
    CHECK(cpu_l2.contains(5));
}

TEST_CASE("filter hit stays local") {
    Tlb cpu_l2(cpu_l2_shape());
    RemoteTranslator remote(RemoteFiltered{10.0, TlbConfig{16, 4, 0.5, 1.0, 0.01}}, cpu_l2, walker(1));
    remote.translate(3);
    const auto probes = remote.stats().remote_probes;
    const auto t = remote.translate(3);
    CHECK(t.level == HitLevel::L1);
    CHECK(t.latency_ns == 0.5);
    CHECK(remote.stats().remote_probes == probes);
}

TEST_CASE("remote filtered conservation and CPU L1 untouched") {
    Xorshift64Star rng(12);
    Tlb cpu_l2(cpu_l2_shape());
    std::vector<Vpn> vpns;
    for (int k = 0; k < 2000; ++k) vpns.push_back(rng.below(300));
    const auto s = simulate_remote(vpns, RemoteFiltered{1.0, TlbConfig{16, 4, 0.5, 1.0, 0.01}}, cpu_l2, walker(1));
    CHECK(s.l1_hits + s.remote_probes == s.refs);
    CHECK(s.l1_hits + s.l2_hits + s.walks == s.refs);
    CHECK(s.l2_probes == s.remote_probes);
}

TEST_CASE("remote translation requires a remote mode") {
    Tlb cpu_l2(cpu_l2_shape());
    CHECK_THROWS_AS(RemoteTranslator(LocalTranslation{}, cpu_l2, walker(1)), DataError);
}
