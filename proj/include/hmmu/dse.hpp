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

#ifndef HMMU_DSE_HPP
#define HMMU_DSE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hmmu/cost.hpp"
#include "hmmu/mmu.hpp"
#include "hmmu/params.hpp"
#include "hmmu/trace.hpp"

namespace hmmu {

// --- configuration spaces ---------------------------------------------------

inline constexpr std::uint32_t kWalkerThreads[] = {1, 2, 4, 8, 16, 32};

// 6 walker-only, 12 L1 + walker, 36 L1 + L2 + walker designs.
std::vector<MmuConfig> enumerate_accel_configs(const ParamPack& pack);
// CPU L1 {32x2, 64x4, 128x8} x L2 {256x4, 512x4, 1024x4}, serial walker.
std::vector<MmuConfig> enumerate_cpu_configs(const ParamPack& pack);
// The calibrated software-only machine: 64-entry L1, 512-entry L2.
MmuConfig baseline_cpu_config(const ParamPack& pack);
MmuConfig cpu_config(const ParamPack& pack, std::uint32_t l1_entries, std::uint32_t l1_ways,
                     std::uint32_t l2_entries);

// Every accelerator MMU crossed with every CPU MMU, local translation.
std::vector<SystemConfig> enumerate_system_configs(const ParamPack& pack);
// The CPU-managed alternatives: one row per CPU MMU.
std::vector<SystemConfig> enumerate_remote_configs(const ParamPack& pack, const TranslationMode& mode);
SystemConfig make_local_system(const MmuConfig& cpu, const MmuConfig& accel);
SystemConfig make_remote_system(const MmuConfig& cpu, const TranslationMode& mode);

// --- simulation -------------------------------------------------------------

/**
 * A trace cut into CPU and accelerator segments with the reference pattern
 * already applied. Each reference keeps the offset (in instructions) of its
 * record from the start of its segment; accelerator issue times derive from
 * it.
 */
struct Workload {
    struct SegmentRefs {
        SegmentKind kind = SegmentKind::Cpu;
        std::uint64_t instructions = 0;
        std::vector<Vpn> vpns;
        std::vector<std::uint64_t> instr_offsets;
    };

    HotspotPartition partition;
    std::vector<SegmentRefs> segments;
    std::uint64_t cpu_refs = 0;
    std::uint64_t acc_refs = 0;
};

Workload prepare_workload(const Trace& trace, const HotspotPartition& partition, const PatternKind& pattern);

// CPU-segment stats only; in local mode these do not depend on the
// accelerator or on the reference pattern.
MmuStats simulate_cpu_side(const Workload& workload, const MmuConfig& cpu);

/**
 * Runs one system design over the workload. CPU segments use a blocking
 * CPU MMU; accelerator segments issue eagerly at their ideal compute
 * timestamps (local) or probe the CPU (remote). Both MMUs keep state across
 * segments. `cached_cpu_side`, when given, replaces the CPU simulation in
 * local mode.
 */
RunMeasurements simulate_system(const Workload& workload, const SystemConfig& system, const ParamPack& pack,
                                const MmuStats* cached_cpu_side = nullptr);

struct Baseline {
    MmuConfig cpu;
    MmuStats stats;
    CostResult cost;
};

// Entire trace on the CPU with the baseline MMU; normalized runtime 1.
Baseline run_baseline(const Trace& trace, const ParamPack& pack);

CostResult evaluate(const Workload& workload, const SystemConfig& system, const ParamPack& pack,
                    const Baseline& baseline);

// --- sweeps -----------------------------------------------------------------

struct SweepRow {
    std::string config_id;
    SystemConfig system;
    std::string pattern;
    CostResult cost;
    double l1_hit_rate = 0.0;
    double l2_hit_rate = 0.0;
    std::uint64_t walks = 0;
    bool area_optimal = false;
    bool energy_optimal = false;
};

struct SweepFailure {
    std::string config_id;
    std::string pattern;
    std::string message;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepFailure> failures;
    double accelerated_fraction = 0.0;
    double amdahl_bound = 1.0;
    double ideal_l1_bound = 1.0;
    Baseline baseline;
};

struct SweepOptions {
    unsigned threads = 0;  // 0: hardware concurrency
};

/**
 * One row per (config, pattern), ordered by config id and then by the order
 * of `patterns`. Rows are independent and may run on worker threads; the
 * result does not depend on scheduling. Pareto flags are set per pattern.
 * A failing row is reported in `failures` and the sweep continues.
 */
SweepResult run_sweep(const Trace& trace, const HotspotPartition& partition, std::span<const SystemConfig> configs,
                      std::span<const PatternKind> patterns, const ParamPack& pack, const SweepOptions& options = {});

// --- Pareto analysis --------------------------------------------------------

enum class CostMetric { Area, Energy };

struct ParetoPoint {
    std::string config_id;
    double runtime = 0.0;
    double area = 0.0;
    double energy = 0.0;
    bool area_optimal = false;
    bool energy_optimal = false;

    bool both() const { return area_optimal && energy_optimal; }
};

// a dominates b: no worse in both coordinates and strictly better in one.
bool dominates(double ax, double ay, double bx, double by);

// Indices (ascending) of the mutually non-dominated points. Exact
// duplicates of a frontier point are kept. Throws on empty input.
std::vector<std::size_t> pareto_front(std::span<const double> xs, std::span<const double> ys);

// Frontier of (metric, runtime) over `rows`; every returned point carries
// both flags computed over the same rows.
std::vector<ParetoPoint> pareto(std::span<const SweepRow> rows, CostMetric x_metric);

// Sets area_optimal / energy_optimal on each row, grouping rows by pattern.
void annotate_pareto(std::vector<SweepRow>& rows);

struct SplitRow {
    std::string config_id;
    std::string pattern;
    double cpu_area = 0.0;
    double acc_area = 0.0;
    double cpu_energy = 0.0;
    double acc_energy = 0.0;
};

// CPU/accelerator split of the rows flagged optimal by either metric.
std::vector<SplitRow> split_breakdown(std::span<const SweepRow> rows);

// --- output -----------------------------------------------------------------

inline constexpr const char* kSweepCsvHeader =
    "config_id,cpu_l1,cpu_l2,acc_l1,acc_l2,ptw_threads,mode,pattern,runtime_ns,normalized_runtime,"
    "area_mm2_cpu,area_mm2_acc,energy_pj_cpu,energy_pj_acc,l1_hit_rate,l2_hit_rate,walks,"
    "area_optimal,energy_optimal";

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
std::string sweep_csv(std::span<const SweepRow> rows);

}  // namespace hmmu

#endif
