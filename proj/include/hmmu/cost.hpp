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

#ifndef HMMU_COST_HPP
#define HMMU_COST_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "hmmu/mmu.hpp"
#include "hmmu/trace.hpp"

namespace hmmu {

struct CalibrationParams {
    double cpi_app = 1.0;        // non-MMU cycles per instruction
    double clock_ghz = 2.0;
    double accel_speedup = 10.0;
    std::string notes;

    void validate() const;
};

// instrs * cpi_app / clock_ghz, in ns.
double cpu_compute_time(std::uint64_t instrs, const CalibrationParams& p);
// cpu_compute_time / accel_speedup.
double acc_compute_time(std::uint64_t instrs, const CalibrationParams& p);

// (1 - f) + f / s
double amdahl_bound(double accelerated_fraction, double speedup);

struct TimeBreakdown {
    double cpu_non_mmu_ns = 0.0;
    double cpu_mmu_ns = 0.0;
    double acc_non_mmu_ns = 0.0;
    double acc_mmu_ns = 0.0;

    double total() const { return cpu_non_mmu_ns + cpu_mmu_ns + acc_non_mmu_ns + acc_mmu_ns; }
};

struct SidePair {
    double cpu = 0.0;
    double acc = 0.0;

    double total() const { return cpu + acc; }
};

struct CostResult {
    TimeBreakdown breakdown;
    double runtime_ns = 0.0;
    double normalized_runtime = 0.0;
    SidePair energy_pj;
    SidePair area_mm2;
};

/**
 * A whole-system MMU design point. The accelerator either owns an MMU
 * (local mode, `accel` set) or relies on the CPU (remote modes, `accel`
 * empty; RemoteFiltered still carries its filter TLB).
 */
struct SystemConfig {
    std::string id;
    MmuConfig cpu;
    TranslationMode mode = LocalTranslation{};
    std::optional<MmuConfig> accel;

    void validate() const;
};

double mmu_area(const MmuConfig& config);
SidePair mmu_area(const SystemConfig& config);

// Probe energies plus four PTE fetches per walk, for an MMU that owns all
// the hardware it used.
double mmu_energy(const MmuStats& stats, const MmuConfig& config);
// Accelerator-side stats of a remote run: the filter is accelerator
// hardware, the CPU L2 probes and walks are charged to the CPU.
SidePair remote_mmu_energy(const MmuStats& stats, const TranslationMode& mode, const MmuConfig& cpu);

struct RunMeasurements {
    MmuStats cpu;  // references executed on the CPU
    MmuStats acc;  // references executed on the accelerator
    SidePair energy_pj;
    SidePair area_mm2;
};

/**
 * Four-term runtime: compute terms come from the calibrated formulas over
 * the partition's instruction counts, MMU terms from the simulated stats.
 * Throws DataError if the baseline runtime is not positive.
 */
CostResult assemble(const HotspotPartition& partition, const RunMeasurements& run,
                    const CalibrationParams& p, double baseline_runtime_ns);

/**
 * Normalized runtime if every accelerator reference hit in `smallest_l1`:
 * acc MMU time = acc_refs * access_time. `cpu_side` is the CPU-segment
 * stats under the baseline CPU MMU.
 */
double ideal_l1_bound(const HotspotPartition& partition, std::uint64_t acc_refs, const MmuStats& cpu_side,
                      const TlbConfig& smallest_l1, const CalibrationParams& p, double baseline_runtime_ns);

}  // namespace hmmu

#endif
