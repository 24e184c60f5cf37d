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

#include "hmmu/params.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "hmmu/error.hpp"

namespace hmmu {

using nlohmann::json;

TlbConfig ParamPack::tlb(std::uint32_t entries, std::uint32_t ways) const {
    const auto key = fmt::format("{}x{}", entries, ways);
    const auto it = tlbs.find(key);
    if (it == tlbs.end()) throw DataError(fmt::format("parameter pack has no entry for TLB {}", key));
    return it->second;
}

PtwConfig ParamPack::ptw(std::uint32_t threads) const {
    const auto it = ptw_area_mm2.find(threads);
    if (it == ptw_area_mm2.end())
        throw DataError(fmt::format("parameter pack has no entry for a {}-thread walker", threads));
    return {threads, walk_latency_ns, walk_mem_access_energy_pj, it->second};
}

PtwConfig ParamPack::cpu_ptw() const {
    auto p = ptw(1);
    p.walk_latency_ns = cpu_walk_latency_ns;
    return p;
}

void ParamPack::validate() const {
    calibration.validate();
    if (one_way_delay_ns < 0) throw DataError("one_way_delay_ns must be >= 0");
    if (!(walk_latency_ns > 0) || !(cpu_walk_latency_ns > 0)) throw DataError("walk latencies must be > 0");
    if (walk_mem_access_energy_pj < 0) throw DataError("walk_mem_access_energy_pj must be >= 0");
    for (const auto& [key, tlb] : tlbs) {
        tlb.validate();
        if (key != tlb.label()) throw DataError(fmt::format("TLB key '{}' does not match its geometry", key));
    }
    for (const auto& [threads, area] : ptw_area_mm2)
        if (threads == 0 || area < 0) throw DataError("walker entries need threads >= 1 and area >= 0");
}

ParamPack default_param_pack() {
    ParamPack pack;
    pack.calibration = {1.0, 2.0, 10.0, "PLACEHOLDER parameters: replace with measured CPI, walk latency and "
                                        "cache-model/synthesis outputs before drawing conclusions"};
    pack.one_way_delay_ns = 1.0;
    pack.walk_latency_ns = 30.0;
    pack.cpu_walk_latency_ns = 30.0;
    pack.walk_mem_access_energy_pj = 10.0;
    const TlbConfig tlbs[] = {
        {32, 2, 0.20, 1.0, 0.010},    {64, 4, 0.25, 1.6, 0.018},   {128, 8, 0.32, 2.8, 0.034},
        {256, 4, 0.45, 4.0, 0.060},   {512, 4, 0.55, 6.5, 0.110},  {1024, 4, 0.70, 11.0, 0.210},
    };
    for (const auto& t : tlbs) pack.tlbs[t.label()] = t;
    pack.ptw_area_mm2 = {{1, 0.010}, {2, 0.019}, {4, 0.037}, {8, 0.072}, {16, 0.140}, {32, 0.275}};
    return pack;
}

namespace {

template <typename T>
T required(const json& j, const char* key) {
    if (!j.contains(key)) throw DataError(fmt::format("parameter pack is missing '{}'", key));
    return j.at(key).get<T>();
}

}  // namespace

ParamPack parse_param_pack(const std::string& json_text) {
    ParamPack pack;
    try {
        const auto j = json::parse(json_text);
        pack.calibration.cpi_app = required<double>(j, "cpi_app");
        pack.calibration.clock_ghz = required<double>(j, "clock_ghz");
        pack.calibration.accel_speedup = required<double>(j, "accel_speedup");
        pack.calibration.notes = j.value("notes", std::string{});
        pack.one_way_delay_ns = required<double>(j, "one_way_delay_ns");
        pack.walk_latency_ns = required<double>(j, "walk_latency_ns");
        pack.cpu_walk_latency_ns = j.value("cpu_walk_latency_ns", pack.walk_latency_ns);
        pack.walk_mem_access_energy_pj = required<double>(j, "walk_mem_access_energy_pj");
        const auto tlbs = required<json>(j, "tlbs");
        for (const auto& [key, t] : tlbs.items()) {
            TlbConfig tlb;
            if (std::sscanf(key.c_str(), "%ux%u", &tlb.entries, &tlb.ways) != 2)
                throw DataError(fmt::format("TLB key '{}' is not <entries>x<ways>", key));
            tlb.access_time_ns = required<double>(t, "access_time_ns");
            tlb.access_energy_pj = required<double>(t, "access_energy_pj");
            tlb.area_mm2 = required<double>(t, "area_mm2");
            pack.tlbs[key] = tlb;
        }
        const auto walkers = required<json>(j, "ptw");
        for (const auto& [key, w] : walkers.items())
            pack.ptw_area_mm2[static_cast<std::uint32_t>(std::stoul(key))] = required<double>(w, "area_mm2");
    } catch (const json::exception& e) {
        throw DataError(fmt::format("parameter pack: {}", e.what()));
    } catch (const std::logic_error& e) {
        throw DataError(fmt::format("parameter pack: bad walker key ({})", e.what()));
    }
    pack.validate();
    return pack;
}

ParamPack load_param_pack(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open parameter pack '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_param_pack(buf.str());
}

std::string param_pack_to_json(const ParamPack& pack) {
    json j;
    j["notes"] = pack.calibration.notes;
    j["cpi_app"] = pack.calibration.cpi_app;
    j["clock_ghz"] = pack.calibration.clock_ghz;
    j["accel_speedup"] = pack.calibration.accel_speedup;
    j["one_way_delay_ns"] = pack.one_way_delay_ns;
    j["walk_latency_ns"] = pack.walk_latency_ns;
    j["cpu_walk_latency_ns"] = pack.cpu_walk_latency_ns;
    j["walk_mem_access_energy_pj"] = pack.walk_mem_access_energy_pj;
    for (const auto& [key, t] : pack.tlbs)
        j["tlbs"][key] = {{"access_time_ns", t.access_time_ns},
                          {"access_energy_pj", t.access_energy_pj},
                          {"area_mm2", t.area_mm2}};
    for (const auto& [threads, area] : pack.ptw_area_mm2) j["ptw"][std::to_string(threads)] = {{"area_mm2", area}};
    return j.dump(2) + "\n";
}

}  // namespace hmmu
