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

#ifndef HMMU_PARAMS_HPP
#define HMMU_PARAMS_HPP

#include <cstdint>
#include <map>
#include <string>

#include "hmmu/cost.hpp"
#include "hmmu/mmu.hpp"

namespace hmmu {

/**
 * Calibration and per-component hardware parameters. TLB timing, energy and
 * area would normally come from a cache model and walker area from
 * synthesis; here they are inputs. JSON keys:
 *
 *   cpi_app, clock_ghz, accel_speedup, notes
 *   one_way_delay_ns
 *   walk_latency_ns, walk_mem_access_energy_pj   (accelerator walker)
 *   cpu_walk_latency_ns                          (optional, defaults to walk_latency_ns)
 *   tlbs: { "<entries>x<ways>": { access_time_ns, access_energy_pj, area_mm2 } }
 *   ptw:  { "<threads>": { area_mm2 } }
 */
struct ParamPack {
    CalibrationParams calibration;
    double one_way_delay_ns = 1.0;
    double walk_latency_ns = 30.0;
    double cpu_walk_latency_ns = 30.0;
    double walk_mem_access_energy_pj = 10.0;
    std::map<std::string, TlbConfig> tlbs;
    std::map<std::uint32_t, double> ptw_area_mm2;

    // Throws DataError naming the missing component.
    TlbConfig tlb(std::uint32_t entries, std::uint32_t ways) const;
    PtwConfig ptw(std::uint32_t threads) const;
    // Serial CPU walker.
    PtwConfig cpu_ptw() const;

    void validate() const;
};

// Placeholder numbers in a plausible range; not measured ground truth.
ParamPack default_param_pack();

ParamPack parse_param_pack(const std::string& json_text);
ParamPack load_param_pack(const std::string& path);
std::string param_pack_to_json(const ParamPack& pack);

}  // namespace hmmu

#endif
