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

#include <algorithm>
#include <functional>

#include <fmt/format.h>

#include "hmmu/error.hpp"
#include "hmmu/mmu.hpp"

namespace hmmu {

void PtwConfig::validate() const {
    if (threads < 1) throw DataError("page table walker needs at least one thread");
    if (!(walk_latency_ns > 0)) throw DataError("walk_latency_ns must be > 0");
    if (walk_mem_access_energy_pj < 0 || area_mm2 < 0)
        throw DataError("walker energy and area must be >= 0");
}

WalkCost walk_cost(const PtwConfig& ptw) {
    return {ptw.walk_latency_ns, kPageTableLevels * ptw.walk_mem_access_energy_pj};
}

WalkScheduler::WalkScheduler(std::uint32_t threads, double walk_latency_ns)
    : free_at_(threads, 0.0), walk_latency_ns_(walk_latency_ns) {}

double WalkScheduler::schedule(double issue_ns) {
    if (issue_ns < last_issue_ns_) throw DataError("walk requests must arrive in issue order");
    last_issue_ns_ = issue_ns;
    // Earliest-free server; all servers are identical so FCFS only needs the
    // minimum release time.
    std::pop_heap(free_at_.begin(), free_at_.end(), std::greater<>{});
    const double start = std::max(issue_ns, free_at_.back());
    const double done = start + walk_latency_ns_;
    free_at_.back() = done;
    std::push_heap(free_at_.begin(), free_at_.end(), std::greater<>{});
    return done - issue_ns;
}

void WalkScheduler::reset() {
    std::fill(free_at_.begin(), free_at_.end(), 0.0);
    last_issue_ns_ = 0.0;
}

void MmuConfig::validate() const {
    if (l1) l1->validate();
    if (l2) l2->validate();
    if (l2 && !l1) throw DataError(fmt::format("MMU {}: an L2 TLB requires an L1 TLB", id));
    ptw.validate();
}

std::string mode_name(const TranslationMode& mode) {
    if (std::holds_alternative<LocalTranslation>(mode)) return "local";
    if (std::holds_alternative<RemoteNoMmu>(mode)) return "remote";
    return "remote-filtered";
}

MmuStats& MmuStats::operator+=(const MmuStats& o) {
    refs += o.refs;
    l1_probes += o.l1_probes;
    l1_hits += o.l1_hits;
    l2_probes += o.l2_probes;
    l2_hits += o.l2_hits;
    walks += o.walks;
    remote_probes += o.remote_probes;
    mmu_time_ns += o.mmu_time_ns;
    mmu_energy_pj += o.mmu_energy_pj;
    return *this;
}

namespace {

// Runs `body` with a zeroed counter set and returns just its contribution,
// folding it into the running totals afterwards.
template <typename Body>
MmuStats isolated(MmuStats& running, Body&& body) {
    MmuStats saved;
    std::swap(saved, running);
    body();
    MmuStats delta = running;
    running = saved;
    running += delta;
    return delta;
}

}  // namespace

LocalMmu::LocalMmu(const MmuConfig& config)
    : config_((config.validate(), config)), walker_(config.ptw.threads, config.ptw.walk_latency_ns) {
    if (config_.l1) l1_.emplace(*config_.l1);
    if (config_.l2) l2_.emplace(*config_.l2);
}

Translation LocalMmu::translate(Vpn vpn, double issue_ns) {
    Translation t;
    ++stats_.refs;
    double probe_ns = 0.0;
    auto account = [&](HitLevel level) {
        t.level = level;
        t.latency_ns += probe_ns;
        stats_.mmu_time_ns += t.latency_ns;
        return t;
    };

    if (l1_) {
        ++stats_.l1_probes;
        probe_ns += l1_->config().access_time_ns;
        stats_.mmu_energy_pj += l1_->config().access_energy_pj;
        if (l1_->lookup(vpn) == TlbResult::Hit) {
            ++stats_.l1_hits;
            return account(HitLevel::L1);
        }
    }
    if (l2_) {
        ++stats_.l2_probes;
        probe_ns += l2_->config().access_time_ns;
        stats_.mmu_energy_pj += l2_->config().access_energy_pj;
        if (l2_->lookup(vpn) == TlbResult::Hit) {
            ++stats_.l2_hits;
            l1_->fill(vpn);
            return account(HitLevel::L2);
        }
    }

    ++stats_.walks;
    const auto cost = walk_cost(config_.ptw);
    stats_.mmu_energy_pj += cost.energy_pj;
    t.latency_ns = walker_.schedule(issue_ns);
    if (l2_) l2_->fill(vpn);
    if (l1_) l1_->fill(vpn);
    return account(HitLevel::Walk);
}

MmuStats LocalMmu::run_segment(std::span<const TimedRef> refs) {
    walker_.reset();
    return isolated(stats_, [&] {
        for (const auto& r : refs) translate(r.vpn, r.issue_ns);
    });
}

MmuStats LocalMmu::run_blocking(std::span<const Vpn> vpns) {
    walker_.reset();
    return isolated(stats_, [&] {
        double clock = 0.0;
        for (const auto vpn : vpns) clock += translate(vpn, clock).latency_ns;
    });
}

RemoteTranslator::RemoteTranslator(const TranslationMode& mode, Tlb& cpu_l2, const PtwConfig& cpu_ptw)
    : cpu_l2_(&cpu_l2), cpu_ptw_(cpu_ptw) {
    cpu_ptw_.validate();
    if (const auto* m = std::get_if<RemoteNoMmu>(&mode)) {
        one_way_delay_ns_ = m->one_way_delay_ns;
    } else if (const auto* f = std::get_if<RemoteFiltered>(&mode)) {
        one_way_delay_ns_ = f->one_way_delay_ns;
        filter_.emplace(f->filter);
    } else {
        throw DataError("remote translation needs a remote mode");
    }
    if (one_way_delay_ns_ < 0) throw DataError("one_way_delay_ns must be >= 0");
}

Translation RemoteTranslator::translate(Vpn vpn) {
    Translation t;
    ++stats_.refs;
    if (filter_) {
        ++stats_.l1_probes;
        t.latency_ns += filter_->config().access_time_ns;
        stats_.mmu_energy_pj += filter_->config().access_energy_pj;
        if (filter_->lookup(vpn) == TlbResult::Hit) {
            ++stats_.l1_hits;
            t.level = HitLevel::L1;
            stats_.mmu_time_ns += t.latency_ns;
            return t;
        }
    }

    ++stats_.remote_probes;
    ++stats_.l2_probes;
    t.latency_ns += 2.0 * one_way_delay_ns_ + cpu_l2_->config().access_time_ns;
    stats_.mmu_energy_pj += cpu_l2_->config().access_energy_pj;
    if (cpu_l2_->lookup(vpn) == TlbResult::Hit) {
        ++stats_.l2_hits;
        t.level = HitLevel::L2;
    } else {
        ++stats_.walks;
        const auto cost = walk_cost(cpu_ptw_);
        t.latency_ns += cost.latency_ns;
        stats_.mmu_energy_pj += cost.energy_pj;
        cpu_l2_->fill(vpn);
        t.level = HitLevel::Walk;
    }
    if (filter_) filter_->fill(vpn);
    stats_.mmu_time_ns += t.latency_ns;
    return t;
}

MmuStats RemoteTranslator::run(std::span<const Vpn> vpns) {
    return isolated(stats_, [&] {
        for (const auto vpn : vpns) translate(vpn);
    });
}

MmuStats simulate_local(std::span<const TimedRef> refs, const MmuConfig& config) {
    LocalMmu mmu(config);
    return mmu.run_segment(refs);
}

MmuStats simulate_remote(std::span<const Vpn> vpns, const TranslationMode& mode, Tlb& cpu_l2,
                         const PtwConfig& cpu_ptw) {
    RemoteTranslator remote(mode, cpu_l2, cpu_ptw);
    return remote.run(vpns);
}

}  // namespace hmmu
