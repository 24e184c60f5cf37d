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
#include <bit>

#include <fmt/format.h>

#include "hmmu/error.hpp"
#include "hmmu/mmu.hpp"

namespace hmmu {

Vpn vpn_of(Addr vaddr) {
    if (vaddr >= kVaLimit) throw DataError(fmt::format("address {:#x} is outside the 48-bit space", vaddr));
    return vaddr >> kPageShift;
}

std::string TlbConfig::label() const { return fmt::format("{}x{}", entries, ways); }

void TlbConfig::validate() const {
    if (entries == 0 || ways == 0 || entries % ways != 0)
        throw DataError(fmt::format("TLB {}: entries must be a positive multiple of ways", label()));
    if (!std::has_single_bit(sets()))
        throw DataError(fmt::format("TLB {}: set count {} is not a power of two", label(), sets()));
    if (access_time_ns < 0 || access_energy_pj < 0 || area_mm2 < 0)
        throw DataError(fmt::format("TLB {}: negative time, energy or area", label()));
}

Tlb::Tlb(const TlbConfig& config) : config_(config) {
    config_.validate();
    tags_.assign(config_.entries, 0);
    occupancy_.assign(config_.sets(), 0);
}

TlbResult Tlb::lookup(Vpn vpn) {
    const auto set = static_cast<std::uint32_t>(vpn & (config_.sets() - 1));
    auto ways = set_span(set);
    const auto used = occupancy_[set];
    for (std::uint32_t i = 0; i < used; ++i) {
        if (ways[i] == vpn) {
            std::rotate(ways.begin(), ways.begin() + i, ways.begin() + i + 1);
            return TlbResult::Hit;
        }
    }
    return TlbResult::Miss;
}

std::optional<Vpn> Tlb::fill(Vpn vpn) {
    const auto set = static_cast<std::uint32_t>(vpn & (config_.sets() - 1));
    auto ways = set_span(set);
    auto& used = occupancy_[set];
    std::optional<Vpn> victim;
    if (used == config_.ways)
        victim = ways[used - 1];
    else
        ++used;
    std::copy_backward(ways.begin(), ways.begin() + used - 1, ways.begin() + used);
    ways[0] = vpn;
    return victim;
}

bool Tlb::contains(Vpn vpn) const {
    const auto set = static_cast<std::uint32_t>(vpn & (config_.sets() - 1));
    const auto* first = tags_.data() + std::size_t{set} * config_.ways;
    return std::find(first, first + occupancy_[set], vpn) != first + occupancy_[set];
}

std::vector<Vpn> Tlb::set_contents(std::uint32_t set) const {
    const auto* first = tags_.data() + std::size_t{set} * config_.ways;
    return {first, first + occupancy_.at(set)};
}

void Tlb::clear() { std::fill(occupancy_.begin(), occupancy_.end(), 0); }

}  // namespace hmmu
