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

#ifndef HMMU_TRACE_HPP
#define HMMU_TRACE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hmmu {

using Addr = std::uint64_t;
using Vpn = std::uint64_t;

inline constexpr unsigned kVaBits = 48;
inline constexpr Addr kVaLimit = Addr{1} << kVaBits;

// One dynamic instruction. At most one data reference (dTLB side only).
struct InstructionRecord {
    Addr pc = 0;
    std::optional<Addr> data_vaddr;

    bool operator==(const InstructionRecord&) const = default;
};

struct Trace {
    std::string name;
    std::vector<InstructionRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
    std::size_t memory_refs() const;

    bool operator==(const Trace&) const = default;
};

// Text form: one record per line, "pc=<hex>" optionally followed by
// " va=<hex>". Lines starting with '#' and blank lines are skipped.
// Hex digits may carry a 0x prefix. Throws ParseError with the line number.
Trace parse_trace(std::istream& in, std::string name = "trace");
Trace parse_trace_string(const std::string& text, std::string name = "trace");
Trace read_trace_file(const std::string& path);

void write_trace(std::ostream& out, const Trace& trace);
std::string format_trace(const Trace& trace);

// Binary form: 16 bytes per record, little-endian pc then vaddr, with an
// all-ones vaddr meaning "no data reference".
void write_trace_binary(std::ostream& out, const Trace& trace);
Trace read_trace_binary(std::istream& in, std::string name = "trace");

// --- synthetic generation -------------------------------------------------

struct StrideLocality {
    std::uint64_t pages = 1;
};
struct UniformLocality {};
struct ZipfLocality {
    double exponent = 1.0;
};
using Locality = std::variant<StrideLocality, UniformLocality, ZipfLocality>;

struct SyntheticSpec {
    std::uint64_t instr_count = 0;
    double mem_ref_ratio = 0.0;
    std::uint64_t working_set_pages = 0;
    Locality locality = UniformLocality{};
    std::uint64_t loop_pcs = 16;
    std::uint64_t loop_iterations = 64;
    std::uint64_t seed = 1;
};

// Layout of generated addresses.
inline constexpr Addr kHotCodeBase = 0x400000;
inline constexpr Addr kColdCodeBase = 0x10000000000;
inline constexpr Vpn kDataBaseVpn = 0x10000;

/**
 * Builds a two-phase trace: a block of cold initialization code (one-shot
 * PCs) followed by a hot loop nest. Each outer iteration runs the
 * `loop_pcs`-instruction body a random number of times (mean
 * `loop_iterations`) and then a short epilogue of one-shot PCs, so the hot
 * runs that hotspot detection finds span a range of lengths.
 *
 * Exactly round(mem_ref_ratio * instr_count) records carry a data address,
 * spread evenly over the trace. Data pages are working-set indices mapped
 * onto VPNs [kDataBaseVpn, kDataBaseVpn + working_set_pages).
 */
Trace generate_synthetic(const SyntheticSpec& spec);

// --- hotspots -------------------------------------------------------------

enum class SegmentKind { Cpu, Acc };

struct Segment {
    SegmentKind kind = SegmentKind::Cpu;
    std::size_t start = 0;
    std::size_t end = 0;  // inclusive

    std::size_t length() const { return end - start + 1; }
    bool operator==(const Segment&) const = default;
};

struct HotspotPartition {
    std::vector<Segment> segments;
    std::size_t trace_length = 0;

    std::size_t accelerated_instructions() const;
    bool operator==(const HotspotPartition&) const = default;
};

/**
 * Two passes: count executions per pc, then mark every maximal run of
 * records whose pc executed more than `hot_exec_threshold` times as an ACC
 * segment if the run is at least `min_hotspot_len` long. Any non-hot record
 * breaks a run. Both thresholds must be >= 1.
 */
HotspotPartition identify_hotspots(const Trace& trace, std::uint64_t hot_exec_threshold,
                                   std::uint64_t min_hotspot_len);

double accelerated_fraction(const HotspotPartition& partition);

// Throws DataError if the segments do not tile [0, trace_length).
void validate_partition(const HotspotPartition& partition);

// --- reference patterns ---------------------------------------------------

struct ProgramOrder {};
struct RandomOrder {
    std::uint64_t seed = 0;
};
struct SortedOrder {};
using PatternKind = std::variant<ProgramOrder, RandomOrder, SortedOrder>;

std::string pattern_name(const PatternKind& pattern);
PatternKind pattern_from_name(const std::string& name, std::uint64_t seed);

// Reorders one ACC segment's VPN stream.
std::vector<Vpn> apply_pattern(std::span<const Vpn> vpns, const PatternKind& pattern);

/**
 * Applies the pattern to every ACC segment independently. Only the data
 * addresses are permuted among the segment's memory records; pcs, the
 * number of records and the positions that carry a reference stay put.
 * Random uses one generator seeded once and consumed segment by segment.
 */
Trace apply_pattern_to_trace(const Trace& trace, const HotspotPartition& partition,
                             const PatternKind& pattern);

}  // namespace hmmu

#endif
