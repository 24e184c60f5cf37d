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

#include "hmmu/dse.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "hmmu/error.hpp"

namespace hmmu {

namespace {

constexpr std::uint32_t kAccelL2Ways = 4;
constexpr std::uint32_t kCpuL2Ways = 4;

struct TlbShape {
    std::uint32_t entries;
    std::uint32_t ways;
};

constexpr TlbShape kAccelL1Shapes[] = {{32, 2}, {64, 4}};
constexpr std::uint32_t kL2Sizes[] = {256, 512, 1024};
constexpr TlbShape kCpuL1Shapes[] = {{32, 2}, {64, 4}, {128, 8}};

std::string walker_tag(std::uint32_t threads) { return fmt::format("ptw{:02}", threads); }

}  // namespace

std::vector<MmuConfig> enumerate_accel_configs(const ParamPack& pack) {
    std::vector<MmuConfig> configs;
    configs.reserve(54);
    for (const auto w : kWalkerThreads)
        configs.push_back({"acc." + walker_tag(w), std::nullopt, std::nullopt, pack.ptw(w)});
    for (const auto& l1 : kAccelL1Shapes) {
        const auto l1_cfg = pack.tlb(l1.entries, l1.ways);
        for (const auto w : kWalkerThreads)
            configs.push_back({fmt::format("acc.l1-{}.{}", l1_cfg.label(), walker_tag(w)), l1_cfg, std::nullopt,
                               pack.ptw(w)});
    }
    for (const auto& l1 : kAccelL1Shapes) {
        const auto l1_cfg = pack.tlb(l1.entries, l1.ways);
        for (const auto l2 : kL2Sizes) {
            const auto l2_cfg = pack.tlb(l2, kAccelL2Ways);
            for (const auto w : kWalkerThreads)
                configs.push_back({fmt::format("acc.l1-{}.l2-{}.{}", l1_cfg.label(), l2_cfg.label(), walker_tag(w)),
                                   l1_cfg, l2_cfg, pack.ptw(w)});
        }
    }
    return configs;
}

MmuConfig cpu_config(const ParamPack& pack, std::uint32_t l1_entries, std::uint32_t l1_ways,
                     std::uint32_t l2_entries) {
    MmuConfig cfg;
    cfg.l1 = pack.tlb(l1_entries, l1_ways);
    cfg.l2 = pack.tlb(l2_entries, kCpuL2Ways);
    cfg.ptw = pack.cpu_ptw();
    cfg.id = fmt::format("cpu.l1-{}.l2-{}", cfg.l1->label(), cfg.l2->label());
    return cfg;
}

std::vector<MmuConfig> enumerate_cpu_configs(const ParamPack& pack) {
    std::vector<MmuConfig> configs;
    for (const auto& l1 : kCpuL1Shapes)
        for (const auto l2 : kL2Sizes) configs.push_back(cpu_config(pack, l1.entries, l1.ways, l2));
    return configs;
}

MmuConfig baseline_cpu_config(const ParamPack& pack) { return cpu_config(pack, 64, 4, 512); }

SystemConfig make_local_system(const MmuConfig& cpu, const MmuConfig& accel) {
    return {cpu.id + "+" + accel.id, cpu, LocalTranslation{}, accel};
}

SystemConfig make_remote_system(const MmuConfig& cpu, const TranslationMode& mode) {
    std::string suffix = mode_name(mode);
    if (const auto* f = std::get_if<RemoteFiltered>(&mode)) suffix += "." + f->filter.label();
    return {cpu.id + "+" + suffix, cpu, mode, std::nullopt};
}

std::vector<SystemConfig> enumerate_system_configs(const ParamPack& pack) {
    const auto cpus = enumerate_cpu_configs(pack);
    const auto accels = enumerate_accel_configs(pack);
    std::vector<SystemConfig> systems;
    systems.reserve(cpus.size() * accels.size());
    for (const auto& accel : accels)
        for (const auto& cpu : cpus) systems.push_back(make_local_system(cpu, accel));
    return systems;
}

std::vector<SystemConfig> enumerate_remote_configs(const ParamPack& pack, const TranslationMode& mode) {
    if (std::holds_alternative<LocalTranslation>(mode)) throw DataError("remote configs need a remote mode");
    std::vector<SystemConfig> systems;
    for (const auto& cpu : enumerate_cpu_configs(pack)) systems.push_back(make_remote_system(cpu, mode));
    return systems;
}

Workload prepare_workload(const Trace& trace, const HotspotPartition& partition, const PatternKind& pattern) {
    validate_partition(partition);
    if (partition.trace_length != trace.size()) throw DataError("partition does not match trace length");
    const auto reordered = apply_pattern_to_trace(trace, partition, pattern);

    Workload w;
    w.partition = partition;
    for (const auto& seg : partition.segments) {
        Workload::SegmentRefs refs;
        refs.kind = seg.kind;
        refs.instructions = seg.length();
        for (auto i = seg.start; i <= seg.end; ++i) {
            if (const auto& va = reordered.records[i].data_vaddr) {
                refs.vpns.push_back(vpn_of(*va));
                refs.instr_offsets.push_back(i - seg.start);
            }
        }
        (seg.kind == SegmentKind::Acc ? w.acc_refs : w.cpu_refs) += refs.vpns.size();
        w.segments.push_back(std::move(refs));
    }
    return w;
}

MmuStats simulate_cpu_side(const Workload& workload, const MmuConfig& cpu) {
    LocalMmu mmu(cpu);
    MmuStats stats;
    for (const auto& seg : workload.segments)
        if (seg.kind == SegmentKind::Cpu) stats += mmu.run_blocking(seg.vpns);
    return stats;
}

RunMeasurements simulate_system(const Workload& workload, const SystemConfig& system, const ParamPack& pack,
                                const MmuStats* cached_cpu_side) {
    system.validate();
    const bool local = std::holds_alternative<LocalTranslation>(system.mode);
    const bool use_cache = local && cached_cpu_side != nullptr;

    RunMeasurements run;
    LocalMmu cpu_mmu(system.cpu);
    std::optional<LocalMmu> acc_mmu;
    std::optional<RemoteTranslator> remote;
    if (local)
        acc_mmu.emplace(*system.accel);
    else
        remote.emplace(system.mode, *cpu_mmu.l2(), system.cpu.ptw);

    std::vector<TimedRef> timed;
    for (const auto& seg : workload.segments) {
        if (seg.kind == SegmentKind::Cpu) {
            if (!use_cache) run.cpu += cpu_mmu.run_blocking(seg.vpns);
        } else if (acc_mmu) {
            timed.resize(seg.vpns.size());
            for (std::size_t k = 0; k < seg.vpns.size(); ++k)
                timed[k] = {seg.vpns[k], acc_compute_time(seg.instr_offsets[k], pack.calibration)};
            run.acc += acc_mmu->run_segment(timed);
        } else {
            run.acc += remote->run(seg.vpns);
        }
    }
    if (use_cache) run.cpu = *cached_cpu_side;

    run.energy_pj.cpu = mmu_energy(run.cpu, system.cpu);
    if (local) {
        run.energy_pj.acc = mmu_energy(run.acc, *system.accel);
    } else {
        const auto split = remote_mmu_energy(run.acc, system.mode, system.cpu);
        run.energy_pj.cpu += split.cpu;
        run.energy_pj.acc = split.acc;
    }
    run.area_mm2 = mmu_area(system);
    return run;
}

Baseline run_baseline(const Trace& trace, const ParamPack& pack) {
    if (trace.empty()) throw DataError("cannot simulate an empty trace");
    Baseline b;
    b.cpu = baseline_cpu_config(pack);
    std::vector<Vpn> vpns;
    vpns.reserve(trace.memory_refs());
    for (const auto& r : trace.records)
        if (r.data_vaddr) vpns.push_back(vpn_of(*r.data_vaddr));
    LocalMmu mmu(b.cpu);
    b.stats = mmu.run_blocking(vpns);

    b.cost.breakdown.cpu_non_mmu_ns = cpu_compute_time(trace.size(), pack.calibration);
    b.cost.breakdown.cpu_mmu_ns = b.stats.mmu_time_ns;
    b.cost.runtime_ns = b.cost.breakdown.total();
    b.cost.normalized_runtime = b.cost.runtime_ns / b.cost.runtime_ns;
    b.cost.energy_pj.cpu = mmu_energy(b.stats, b.cpu);
    b.cost.area_mm2.cpu = mmu_area(b.cpu);
    return b;
}

CostResult evaluate(const Workload& workload, const SystemConfig& system, const ParamPack& pack,
                    const Baseline& baseline) {
    const auto run = simulate_system(workload, system, pack);
    return assemble(workload.partition, run, pack.calibration, baseline.cost.runtime_ns);
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

SweepResult run_sweep(const Trace& trace, const HotspotPartition& partition, std::span<const SystemConfig> configs,
                      std::span<const PatternKind> patterns, const ParamPack& pack, const SweepOptions& options) {
    pack.validate();
    if (patterns.empty()) throw DataError("sweep needs at least one reference pattern");

    std::vector<std::size_t> order(configs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return configs[a].id < configs[b].id; });
    for (std::size_t k = 1; k < order.size(); ++k)
        if (configs[order[k]].id == configs[order[k - 1]].id)
            throw DataError("duplicate config id '" + configs[order[k]].id + "'");

    SweepResult result;
    result.baseline = run_baseline(trace, pack);
    result.accelerated_fraction = accelerated_fraction(partition);
    result.amdahl_bound = amdahl_bound(result.accelerated_fraction, pack.calibration.accel_speedup);

    std::vector<Workload> workloads;
    for (const auto& p : patterns) workloads.push_back(prepare_workload(trace, partition, p));

    const auto baseline_cpu_side = simulate_cpu_side(workloads.front(), result.baseline.cpu);
    result.ideal_l1_bound = ideal_l1_bound(partition, workloads.front().acc_refs, baseline_cpu_side,
                                           pack.tlb(32, 2), pack.calibration, result.baseline.cost.runtime_ns);

    // Local-mode CPU segments see neither the accelerator nor the pattern.
    std::map<std::string, MmuStats> cpu_side_cache;
    for (const auto& c : configs) {
        if (!std::holds_alternative<LocalTranslation>(c.mode) || cpu_side_cache.contains(c.cpu.id)) continue;
        try {
            cpu_side_cache.emplace(c.cpu.id, simulate_cpu_side(workloads.front(), c.cpu));
        } catch (const std::exception&) {
            // Reported per row below.
        }
    }

    const std::size_t tasks = order.size() * patterns.size();
    std::vector<std::optional<SweepRow>> rows(tasks);
    std::vector<std::optional<SweepFailure>> failures(tasks);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
            const auto& system = configs[order[t / patterns.size()]];
            const auto pi = t % patterns.size();
            const auto pattern = pattern_name(patterns[pi]);
            try {
                const auto cached = cpu_side_cache.find(system.cpu.id);
                const MmuStats* cpu_side = cached == cpu_side_cache.end() ? nullptr : &cached->second;
                const auto run = simulate_system(workloads[pi], system, pack, cpu_side);
                SweepRow row;
                row.config_id = system.id;
                row.system = system;
                row.pattern = pattern;
                row.cost = assemble(partition, run, pack.calibration, result.baseline.cost.runtime_ns);
                row.l1_hit_rate = ratio(run.acc.l1_hits, run.acc.l1_probes);
                row.l2_hit_rate = ratio(run.acc.l2_hits, run.acc.l2_probes);
                row.walks = run.acc.walks;
                rows[t] = std::move(row);
            } catch (const std::exception& e) {
                failures[t] = SweepFailure{system.id, pattern, e.what()};
            }
        }
    };

    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(tasks, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    for (std::size_t t = 0; t < tasks; ++t) {
        if (rows[t]) result.rows.push_back(std::move(*rows[t]));
        if (failures[t]) result.failures.push_back(std::move(*failures[t]));
    }
    if (!result.rows.empty()) annotate_pareto(result.rows);
    return result;
}

}  // namespace hmmu
