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

#ifndef HMMU_CLI_HPP
#define HMMU_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmmu/dse.hpp"
#include "hmmu/trace.hpp"

namespace hmmu::cli {

// Stable process exit codes.
enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternal = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SyntheticSpec parse_synthetic_spec(const std::string& json_text);
SyntheticSpec load_synthetic_spec(const std::string& path);

struct RunManifest {
    std::optional<std::string> trace_path;
    std::optional<SyntheticSpec> synthetic;
    std::optional<std::string> calib_path;  // default parameter pack when empty
    std::uint64_t hot_exec_threshold = 100;
    std::vector<std::uint64_t> min_hotspot_lens{100};
    std::vector<std::string> patterns{"program"};
    std::vector<std::string> modes{"local"};
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;

    // Throws UsageError for a missing seed, no trace source, unknown
    // patterns or modes, and DataError for unreadable input paths.
    void validate() const;
};

// Manifest JSON keys: trace | spec (object or path), calib, hot_threshold,
// min_hotspot (array), patterns, modes, out, seed, threads. Relative paths
// are taken against `base_dir` when it is non-empty.
RunManifest parse_manifest(const std::string& json_text, const std::string& base_dir = "");
RunManifest load_manifest(const std::string& path);

// Writes the trace (text, or binary when `out_path` ends in .bin).
Trace cmd_gen_trace(const SyntheticSpec& spec, const std::string& out_path);

struct HotspotRow {
    std::uint64_t min_hotspot_len = 0;
    double accelerated_fraction = 0.0;
    std::size_t acc_segments = 0;
    std::size_t acc_instructions = 0;
};

std::vector<HotspotRow> hotspot_table(const Trace& trace, std::uint64_t hot_exec_threshold,
                                      std::vector<std::uint64_t> min_hotspot_lens);
void print_hotspot_table(std::ostream& out, const std::vector<HotspotRow>& rows);
void write_hotspot_csv(std::ostream& out, const std::vector<HotspotRow>& rows);

struct SweepOutputs {
    SweepResult result;
    std::string csv_path;
    std::string pareto_csv_path;
    std::string summary_path;
    std::string summary;
};

// The hotspot threshold used for sweeps: the middle of the supplied list.
std::uint64_t sweep_hotspot_len(std::vector<std::uint64_t> lens);

std::vector<SystemConfig> configs_for_modes(const std::vector<std::string>& modes, const ParamPack& pack);

// Runs the whole pipeline and writes sweep.csv, pareto.csv and summary.txt
// into the manifest's output directory.
SweepOutputs cmd_sweep(const RunManifest& manifest);

std::string format_summary(const SweepResult& result, const RunManifest& manifest, std::uint64_t min_hotspot_len);

// Entry point shared by the executable; returns an ExitCode.
int run(int argc, char** argv);

}  // namespace hmmu::cli

#endif
