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

#include "hmmu/cost.hpp"

#include <fmt/format.h>

#include "hmmu/error.hpp"

namespace hmmu {

void CalibrationParams::validate() const {
    if (!(cpi_app > 0)) throw DataError("cpi_app must be > 0");
    if (!(clock_ghz > 0)) throw DataError("clock_ghz must be > 0");
    if (!(accel_speedup >= 1)) throw DataError("accel_speedup must be >= 1");
}

double cpu_compute_time(std::uint64_t instrs, const CalibrationParams& p) {
    return static_cast<double>(instrs) * p.cpi_app / p.clock_ghz;
}

double acc_compute_time(std::uint64_t instrs, const CalibrationParams& p) {
    return cpu_compute_time(instrs, p) / p.accel_speedup;
}

double amdahl_bound(double f, double s) {
    if (!(f >= 0.0 && f <= 1.0)) throw DataError(fmt::format("accelerated fraction {} outside [0, 1]", f));
    if (!(s >= 1.0)) throw DataError(fmt::format("speedup {} below 1", s));
    return (1.0 - f) + f / s;
}

void SystemConfig::validate() const {
    cpu.validate();
    if (!cpu.l2) throw DataError(fmt::format("system {}: CPU MMU needs an L2 TLB", id));
    const bool local = std::holds_alternative<LocalTranslation>(mode);
    if (local != accel.has_value())
        throw DataError(fmt::format("system {}: accelerator MMU must be present exactly in local mode", id));
    if (accel) accel->validate();
    if (const auto* f = std::get_if<RemoteFiltered>(&mode)) f->filter.validate();
}

double mmu_area(const MmuConfig& config) {
    double area = config.ptw.area_mm2;
    if (config.l1) area += config.l1->area_mm2;
    if (config.l2) area += config.l2->area_mm2;
    return area;
}

SidePair mmu_area(const SystemConfig& config) {
    SidePair area;
    area.cpu = mmu_area(config.cpu);
    if (config.accel)
        area.acc = mmu_area(*config.accel);
    else if (const auto* f = std::get_if<RemoteFiltered>(&config.mode))
        area.acc = f->filter.area_mm2;
    return area;
}

double mmu_energy(const MmuStats& stats, const MmuConfig& config) {
    double energy = static_cast<double>(stats.walks) * walk_cost(config.ptw).energy_pj;
    if (config.l1) energy += static_cast<double>(stats.l1_probes) * config.l1->access_energy_pj;
    if (config.l2) energy += static_cast<double>(stats.l2_probes) * config.l2->access_energy_pj;
    return energy;
}

SidePair remote_mmu_energy(const MmuStats& stats, const TranslationMode& mode, const MmuConfig& cpu) {
    SidePair energy;
    if (const auto* f = std::get_if<RemoteFiltered>(&mode))
        energy.acc = static_cast<double>(stats.l1_probes) * f->filter.access_energy_pj;
    energy.cpu = static_cast<double>(stats.walks) * walk_cost(cpu.ptw).energy_pj;
    if (cpu.l2) energy.cpu += static_cast<double>(stats.l2_probes) * cpu.l2->access_energy_pj;
    return energy;
}

CostResult assemble(const HotspotPartition& partition, const RunMeasurements& run,
                    const CalibrationParams& p, double baseline_runtime_ns) {
    if (!(baseline_runtime_ns > 0)) throw DataError("baseline runtime must be > 0");
    const auto acc_instrs = partition.accelerated_instructions();
    const auto cpu_instrs = partition.trace_length - acc_instrs;

    CostResult result;
    result.breakdown.cpu_non_mmu_ns = cpu_compute_time(cpu_instrs, p);
    result.breakdown.cpu_mmu_ns = run.cpu.mmu_time_ns;
    result.breakdown.acc_non_mmu_ns = acc_compute_time(acc_instrs, p);
    result.breakdown.acc_mmu_ns = run.acc.mmu_time_ns;
    result.runtime_ns = result.breakdown.total();
    result.normalized_runtime = result.runtime_ns / baseline_runtime_ns;
    result.energy_pj = run.energy_pj;
    result.area_mm2 = run.area_mm2;
    return result;
}

double ideal_l1_bound(const HotspotPartition& partition, std::uint64_t acc_refs, const MmuStats& cpu_side,
                      const TlbConfig& smallest_l1, const CalibrationParams& p, double baseline_runtime_ns) {
    RunMeasurements run;
    run.cpu = cpu_side;
    run.acc.refs = acc_refs;
    run.acc.l1_probes = acc_refs;
    run.acc.l1_hits = acc_refs;
    run.acc.mmu_time_ns = static_cast<double>(acc_refs) * smallest_l1.access_time_ns;
    return assemble(partition, run, p, baseline_runtime_ns).normalized_runtime;
}

}  // namespace hmmu
