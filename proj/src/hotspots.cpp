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
#include <unordered_map>

#include <fmt/format.h>

#include "hmmu/error.hpp"
#include "hmmu/rng.hpp"
#include "hmmu/trace.hpp"

namespace hmmu {

std::size_t HotspotPartition::accelerated_instructions() const {
    std::size_t n = 0;
    for (const auto& s : segments)
        if (s.kind == SegmentKind::Acc) n += s.length();
    return n;
}

HotspotPartition identify_hotspots(const Trace& trace, std::uint64_t hot_exec_threshold,
                                   std::uint64_t min_hotspot_len) {
    if (hot_exec_threshold < 1 || min_hotspot_len < 1)
        throw DataError("hotspot thresholds must be >= 1");

    std::unordered_map<Addr, std::uint64_t> executions;
    for (const auto& r : trace.records) ++executions[r.pc];

    HotspotPartition partition;
    partition.trace_length = trace.size();
    auto push = [&](SegmentKind kind, std::size_t start, std::size_t end) {
        // Adjacent segments of the same kind merge.
        if (!partition.segments.empty() && partition.segments.back().kind == kind)
            partition.segments.back().end = end;
        else
            partition.segments.push_back({kind, start, end});
    };

    const auto n = trace.size();
    std::size_t i = 0;
    while (i < n) {
        const bool hot = executions[trace.records[i].pc] > hot_exec_threshold;
        std::size_t j = i;
        while (j + 1 < n && (executions[trace.records[j + 1].pc] > hot_exec_threshold) == hot) ++j;
        const bool offload = hot && (j - i + 1) >= min_hotspot_len;
        push(offload ? SegmentKind::Acc : SegmentKind::Cpu, i, j);
        i = j + 1;
    }
    return partition;
}

double accelerated_fraction(const HotspotPartition& partition) {
    if (partition.trace_length == 0) return 0.0;
    return static_cast<double>(partition.accelerated_instructions()) /
           static_cast<double>(partition.trace_length);
}

void validate_partition(const HotspotPartition& partition) {
    std::size_t expected = 0;
    for (const auto& s : partition.segments) {
        if (s.start != expected || s.end < s.start)
            throw DataError(fmt::format("partition segment [{}, {}] breaks tiling at {}", s.start, s.end, expected));
        expected = s.end + 1;
    }
    if (expected != partition.trace_length)
        throw DataError(fmt::format("partition covers {} of {} records", expected, partition.trace_length));
}

std::string pattern_name(const PatternKind& pattern) {
    if (std::holds_alternative<ProgramOrder>(pattern)) return "program";
    if (std::holds_alternative<RandomOrder>(pattern)) return "random";
    return "sorted";
}

PatternKind pattern_from_name(const std::string& name, std::uint64_t seed) {
    if (name == "program") return ProgramOrder{};
    if (name == "random") return RandomOrder{seed};
    if (name == "sorted") return SortedOrder{};
    throw DataError("unknown pattern '" + name + "' (expected program, random or sorted)");
}

namespace {

template <typename T>
void reorder(std::span<T> values, const PatternKind& pattern, Xorshift64Star* rng) {
    if (std::holds_alternative<SortedOrder>(pattern))
        std::sort(values.begin(), values.end());
    else if (std::holds_alternative<RandomOrder>(pattern))
        shuffle(values, *rng);
}

}  // namespace

std::vector<Vpn> apply_pattern(std::span<const Vpn> vpns, const PatternKind& pattern) {
    std::vector<Vpn> out(vpns.begin(), vpns.end());
    const auto* random = std::get_if<RandomOrder>(&pattern);
    Xorshift64Star rng(random ? random->seed : 0);
    reorder(std::span<Vpn>(out), pattern, &rng);
    return out;
}

Trace apply_pattern_to_trace(const Trace& trace, const HotspotPartition& partition,
                             const PatternKind& pattern) {
    Trace out = trace;
    if (std::holds_alternative<ProgramOrder>(pattern)) return out;
    if (partition.trace_length != trace.size())
        throw DataError("partition does not match trace length");

    const auto* random = std::get_if<RandomOrder>(&pattern);
    Xorshift64Star rng(random ? random->seed : 0);
    std::vector<std::size_t> slots;
    std::vector<Addr> addrs;
    for (const auto& seg : partition.segments) {
        if (seg.kind != SegmentKind::Acc) continue;
        slots.clear();
        addrs.clear();
        for (auto i = seg.start; i <= seg.end; ++i) {
            if (const auto& va = trace.records[i].data_vaddr) {
                slots.push_back(i);
                addrs.push_back(*va);
            }
        }
        reorder(std::span<Addr>(addrs), pattern, &rng);
        for (std::size_t k = 0; k < slots.size(); ++k) out.records[slots[k]].data_vaddr = addrs[k];
    }
    return out;
}

}  // namespace hmmu
