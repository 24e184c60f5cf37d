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

#ifndef HMMU_MMU_HPP
#define HMMU_MMU_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hmmu/trace.hpp"

namespace hmmu {

inline constexpr unsigned kPageShift = 12;
inline constexpr unsigned kPageTableLevels = 4;

// 4KB pages. Throws DataError for addresses outside the 48-bit space.
Vpn vpn_of(Addr vaddr);

struct TlbConfig {
    std::uint32_t entries = 0;
    std::uint32_t ways = 0;
    double access_time_ns = 0.0;
    double access_energy_pj = 0.0;
    double area_mm2 = 0.0;

    std::uint32_t sets() const { return ways == 0 ? 0 : entries / ways; }
    // "<entries>x<ways>", the key used by parameter packs and config ids.
    std::string label() const;
    void validate() const;

    bool operator==(const TlbConfig&) const = default;
};

enum class TlbResult { Hit, Miss };

/**
 * Set-associative TLB with true LRU replacement per set. Set index is the
 * VPN modulo the set count. Each set keeps its tags most-recent-first.
 */
class Tlb {
public:
    explicit Tlb(const TlbConfig& config);

    const TlbConfig& config() const { return config_; }

    // On a hit the entry becomes most-recent; a miss leaves the state alone.
    TlbResult lookup(Vpn vpn);
    // Inserts as most-recent and returns the LRU victim if the set was full.
    // The vpn must not already be present.
    std::optional<Vpn> fill(Vpn vpn);

    bool contains(Vpn vpn) const;
    // Tags of one set, most-recent first.
    std::vector<Vpn> set_contents(std::uint32_t set) const;
    void clear();

private:
    std::span<Vpn> set_span(std::uint32_t set) { return {tags_.data() + std::size_t{set} * config_.ways, config_.ways}; }

    TlbConfig config_;
    std::vector<Vpn> tags_;
    std::vector<std::uint32_t> occupancy_;
};

struct PtwConfig {
    std::uint32_t threads = 1;
    double walk_latency_ns = 0.0;
    double walk_mem_access_energy_pj = 0.0;
    double area_mm2 = 0.0;

    void validate() const;
    bool operator==(const PtwConfig&) const = default;
};

struct WalkCost {
    double latency_ns = 0.0;
    double energy_pj = 0.0;
};

// A four-level radix walk: fixed latency, four PTE fetches.
WalkCost walk_cost(const PtwConfig& ptw);

/**
 * W identical walk servers fed first-come-first-served in issue order. Issue
 * times must be non-decreasing. schedule() returns the walk's latency
 * measured from its issue time (queueing plus service).
 */
class WalkScheduler {
public:
    WalkScheduler(std::uint32_t threads, double walk_latency_ns);

    double schedule(double issue_ns);
    // Forget queued work; servers are idle from time zero.
    void reset();

private:
    std::vector<double> free_at_;  // min-heap of server release times
    double walk_latency_ns_;
    double last_issue_ns_ = 0.0;
};

struct MmuConfig {
    std::string id;
    std::optional<TlbConfig> l1;
    std::optional<TlbConfig> l2;
    PtwConfig ptw;

    void validate() const;
    bool operator==(const MmuConfig&) const = default;
};

struct RemoteNoMmu {
    double one_way_delay_ns = 0.0;
};
struct RemoteFiltered {
    double one_way_delay_ns = 0.0;
    TlbConfig filter;
};
struct LocalTranslation {};
using TranslationMode = std::variant<LocalTranslation, RemoteNoMmu, RemoteFiltered>;

std::string mode_name(const TranslationMode& mode);

/**
 * Counters for one side of a run. In remote modes the "l1" counters belong
 * to the accelerator's filter TLB, the "l2" counters to the CPU's L2 TLB as
 * probed remotely, and walks to the CPU walker; remote_probes counts the
 * CPU-bound requests. l1_hits + l2_hits + walks == refs in every mode.
 */
struct MmuStats {
    std::uint64_t refs = 0;
    std::uint64_t l1_probes = 0;
    std::uint64_t l1_hits = 0;
    std::uint64_t l2_probes = 0;
    std::uint64_t l2_hits = 0;
    std::uint64_t walks = 0;
    std::uint64_t remote_probes = 0;
    double mmu_time_ns = 0.0;
    double mmu_energy_pj = 0.0;

    MmuStats& operator+=(const MmuStats& other);
    bool operator==(const MmuStats&) const = default;
};

struct TimedRef {
    Vpn vpn = 0;
    double issue_ns = 0.0;
};

enum class HitLevel { L1, L2, Walk };

struct Translation {
    HitLevel level = HitLevel::Walk;
    double latency_ns = 0.0;  // probe times plus, for walks, queueing and service
};

/**
 * An MMU next to the requester: optional L1, optional L2, multithreaded
 * walker. TLB state lives as long as the object. Walks fill L2 then L1; an
 * L2 hit refills L1; L1 victims are dropped.
 */
class LocalMmu {
public:
    explicit LocalMmu(const MmuConfig& config);

    const MmuConfig& config() const { return config_; }

    Translation translate(Vpn vpn, double issue_ns);

    // Translates a segment of references issued eagerly; the walker
    // timeline restarts at zero for each call, TLB contents persist.
    MmuStats run_segment(std::span<const TimedRef> refs);
    // Blocking requester: each reference issues only after the previous
    // translation finished, so walks never queue.
    MmuStats run_blocking(std::span<const Vpn> vpns);

    const MmuStats& stats() const { return stats_; }
    Tlb* l2() { return l2_ ? &*l2_ : nullptr; }

private:
    MmuConfig config_;
    std::optional<Tlb> l1_;
    std::optional<Tlb> l2_;
    WalkScheduler walker_;
    MmuStats stats_;
};

/**
 * CPU-managed translation for an accelerator. Requests that miss the
 * optional filter travel to the CPU, probe its L2 TLB and, on a miss, wait
 * for a serial CPU walk. Completed walks fill the CPU L2 and the filter.
 */
class RemoteTranslator {
public:
    // `cpu_l2` must outlive the translator.
    RemoteTranslator(const TranslationMode& mode, Tlb& cpu_l2, const PtwConfig& cpu_ptw);

    Translation translate(Vpn vpn);
    MmuStats run(std::span<const Vpn> vpns);

    const MmuStats& stats() const { return stats_; }

private:
    double one_way_delay_ns_ = 0.0;
    std::optional<Tlb> filter_;
    Tlb* cpu_l2_;
    PtwConfig cpu_ptw_;
    MmuStats stats_;
};

// Fresh-state conveniences over the classes above.
MmuStats simulate_local(std::span<const TimedRef> refs, const MmuConfig& config);
MmuStats simulate_remote(std::span<const Vpn> vpns, const TranslationMode& mode, Tlb& cpu_l2,
                         const PtwConfig& cpu_ptw);

}  // namespace hmmu

#endif
