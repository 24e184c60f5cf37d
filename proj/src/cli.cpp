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

#include "hmmu/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include "CLI11.hpp"
#include "json.hpp"

#include "hmmu/error.hpp"
#include "hmmu/params.hpp"

namespace hmmu::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SyntheticSpec spec_from_json(const json& j) {
    SyntheticSpec spec;
    spec.instr_count = j.at("instr_count").get<std::uint64_t>();
    spec.mem_ref_ratio = j.at("mem_ref_ratio").get<double>();
    spec.working_set_pages = j.at("working_set_pages").get<std::uint64_t>();
    spec.loop_pcs = j.value("loop_pcs", spec.loop_pcs);
    spec.loop_iterations = j.value("loop_iterations", spec.loop_iterations);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("locality")) {
        const auto& loc = j.at("locality");
        const auto kind = loc.is_string() ? loc.get<std::string>() : loc.at("kind").get<std::string>();
        if (kind == "uniform")
            spec.locality = UniformLocality{};
        else if (kind == "stride")
            spec.locality = StrideLocality{loc.is_object() ? loc.value("pages", std::uint64_t{1}) : 1};
        else if (kind == "zipf")
            spec.locality = ZipfLocality{loc.is_object() ? loc.value("exponent", 1.0) : 1.0};
        else
            throw DataError("unknown locality '" + kind + "' (expected uniform, stride or zipf)");
    }
    return spec;
}

TranslationMode mode_from_name(const std::string& name, const ParamPack& pack) {
    if (name == "local") return LocalTranslation{};
    if (name == "remote") return RemoteNoMmu{pack.one_way_delay_ns};
    if (name == "remote-filtered") return RemoteFiltered{pack.one_way_delay_ns, pack.tlb(64, 4)};
    throw UsageError("unknown mode '" + name + "' (expected local, remote or remote-filtered)");
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << bytes;
    if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace

SyntheticSpec parse_synthetic_spec(const std::string& json_text) {
    try {
        return spec_from_json(json::parse(json_text));
    } catch (const json::exception& e) {
        throw DataError(fmt::format("synthetic spec: {}", e.what()));
    }
}

SyntheticSpec load_synthetic_spec(const std::string& path) { return parse_synthetic_spec(slurp(path)); }

void RunManifest::validate() const {
    if (!seed) throw UsageError("a seed is required (--seed or \"seed\")");
    if (!trace_path && !synthetic) throw UsageError("either a trace or a synthetic spec is required");
    if (trace_path && synthetic) throw UsageError("give a trace or a synthetic spec, not both");
    if (trace_path && !fs::exists(*trace_path)) throw DataError("trace '" + *trace_path + "' does not exist");
    if (calib_path && !fs::exists(*calib_path)) throw DataError("calibration '" + *calib_path + "' does not exist");
    if (min_hotspot_lens.empty()) throw UsageError("at least one minimum hotspot length is required");
    if (hot_exec_threshold < 1 || std::ranges::any_of(min_hotspot_lens, [](auto v) { return v < 1; }))
        throw UsageError("hotspot thresholds must be >= 1");
    if (patterns.empty() || modes.empty()) throw UsageError("at least one pattern and one mode are required");
    for (const auto& p : patterns)
        if (p != "program" && p != "random" && p != "sorted") throw UsageError("unknown pattern '" + p + "'");
    for (const auto& m : modes)
        if (m != "local" && m != "remote" && m != "remote-filtered") throw UsageError("unknown mode '" + m + "'");
}

RunManifest parse_manifest(const std::string& json_text, const std::string& base_dir) {
    const auto resolve = [&](const std::string& path) {
        return base_dir.empty() || fs::path(path).is_absolute() ? path : (fs::path(base_dir) / path).string();
    };
    RunManifest m;
    try {
        const auto j = json::parse(json_text);
        if (j.contains("trace")) m.trace_path = resolve(j.at("trace").get<std::string>());
        if (j.contains("spec")) {
            const auto& s = j.at("spec");
            m.synthetic = s.is_string() ? load_synthetic_spec(resolve(s.get<std::string>())) : spec_from_json(s);
        }
        if (j.contains("calib")) m.calib_path = resolve(j.at("calib").get<std::string>());
        m.hot_exec_threshold = j.value("hot_threshold", m.hot_exec_threshold);
        m.min_hotspot_lens = j.value("min_hotspot", m.min_hotspot_lens);
        m.patterns = j.value("patterns", m.patterns);
        m.modes = j.value("modes", m.modes);
        if (j.contains("out")) m.out_dir = resolve(j.at("out").get<std::string>());
        if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
        m.threads = j.value("threads", m.threads);
    } catch (const json::exception& e) {
        throw DataError(fmt::format("manifest: {}", e.what()));
    }
    return m;
}

RunManifest load_manifest(const std::string& path) {
    return parse_manifest(slurp(path), fs::path(path).parent_path().string());
}

Trace cmd_gen_trace(const SyntheticSpec& spec, const std::string& out_path) {
    auto trace = generate_synthetic(spec);
    std::ostringstream out;
    if (out_path.ends_with(".bin"))
        write_trace_binary(out, trace);
    else
        write_trace(out, trace);
    write_file(out_path, out.str());
    return trace;
}

std::vector<HotspotRow> hotspot_table(const Trace& trace, std::uint64_t hot_exec_threshold,
                                      std::vector<std::uint64_t> min_hotspot_lens) {
    std::sort(min_hotspot_lens.begin(), min_hotspot_lens.end());
    std::vector<HotspotRow> rows;
    for (const auto len : min_hotspot_lens) {
        const auto partition = identify_hotspots(trace, hot_exec_threshold, len);
        HotspotRow row{len, accelerated_fraction(partition), 0, partition.accelerated_instructions()};
        row.acc_segments = static_cast<std::size_t>(std::ranges::count_if(
            partition.segments, [](const Segment& s) { return s.kind == SegmentKind::Acc; }));
        rows.push_back(row);
    }
    return rows;
}

void print_hotspot_table(std::ostream& out, const std::vector<HotspotRow>& rows) {
    out << fmt::format("{:>16} {:>21} {:>13} {:>17}\n", "min_hotspot_len", "accelerated_fraction", "acc_segments",
                       "acc_instructions");
    for (const auto& r : rows)
        out << fmt::format("{:>16} {:>21.6f} {:>13} {:>17}\n", r.min_hotspot_len, r.accelerated_fraction,
                           r.acc_segments, r.acc_instructions);
}

void write_hotspot_csv(std::ostream& out, const std::vector<HotspotRow>& rows) {
    out << "min_hotspot_len,accelerated_fraction,acc_segments,acc_instructions\n";
    for (const auto& r : rows)
        out << fmt::format("{},{},{},{}\n", r.min_hotspot_len, r.accelerated_fraction, r.acc_segments,
                           r.acc_instructions);
}

std::uint64_t sweep_hotspot_len(std::vector<std::uint64_t> lens) {
    if (lens.empty()) throw UsageError("no minimum hotspot length given");
    std::sort(lens.begin(), lens.end());
    return lens[(lens.size() - 1) / 2];
}

std::vector<SystemConfig> configs_for_modes(const std::vector<std::string>& modes, const ParamPack& pack) {
    std::vector<SystemConfig> configs;
    for (const auto& name : modes) {
        const auto mode = mode_from_name(name, pack);
        auto more = std::holds_alternative<LocalTranslation>(mode) ? enumerate_system_configs(pack)
                                                                   : enumerate_remote_configs(pack, mode);
        configs.insert(configs.end(), more.begin(), more.end());
    }
    return configs;
}

std::string format_summary(const SweepResult& result, const RunManifest& manifest, std::uint64_t min_hotspot_len) {
    std::string s;
    auto line = [&](std::string_view f, auto&&... args) { s += fmt::vformat(f, fmt::make_format_args(args...)) + "\n"; };
    line("rows: {}  failures: {}", result.rows.size(), result.failures.size());
    line("seed: {}  hot_threshold: {}  min_hotspot_len: {}", *manifest.seed, manifest.hot_exec_threshold,
         min_hotspot_len);
    line("accelerated_fraction: {:.6f}", result.accelerated_fraction);
    line("baseline_runtime_ns: {:.3f}", result.baseline.cost.runtime_ns);
    line("amdahl_bound: {:.6f}", result.amdahl_bound);
    line("ideal_l1_bound: {:.6f}", result.ideal_l1_bound);

    std::vector<std::string> groups;
    for (const auto& r : result.rows) {
        auto key = mode_name(r.system.mode) + "/" + r.pattern;
        if (std::ranges::find(groups, key) == groups.end()) groups.push_back(key);
    }
    std::ranges::sort(groups);
    for (const auto& g : groups) {
        const SweepRow* fastest = nullptr;
        const SweepRow* smallest = nullptr;
        const SweepRow* frugal = nullptr;
        std::size_t area_opt = 0, energy_opt = 0, both = 0;
        for (const auto& r : result.rows) {
            if (mode_name(r.system.mode) + "/" + r.pattern != g) continue;
            if (!fastest || r.cost.runtime_ns < fastest->cost.runtime_ns) fastest = &r;
            if (!smallest || r.cost.area_mm2.total() < smallest->cost.area_mm2.total()) smallest = &r;
            if (!frugal || r.cost.energy_pj.total() < frugal->cost.energy_pj.total()) frugal = &r;
            area_opt += r.area_optimal;
            energy_opt += r.energy_optimal;
            both += r.area_optimal && r.energy_optimal;
        }
        line("[{}]", g);
        line("  min normalized runtime: {:.6f} ({})", fastest->cost.normalized_runtime, fastest->config_id);
        line("  min total area mm2:     {:.6f} ({})", smallest->cost.area_mm2.total(), smallest->config_id);
        line("  min total energy pJ:    {:.3f} ({})", frugal->cost.energy_pj.total(), frugal->config_id);
        line("  area-optimal: {}  energy-optimal: {}  both: {}", area_opt, energy_opt, both);
        line("  min runtime >= amdahl bound: {}",
             fastest->cost.normalized_runtime >= result.amdahl_bound - 1e-9 ? "yes" : "NO");
    }
    for (const auto& f : result.failures) line("failed {} [{}]: {}", f.config_id, f.pattern, f.message);
    return s;
}

SweepOutputs cmd_sweep(const RunManifest& manifest) {
    manifest.validate();
    const auto pack = manifest.calib_path ? load_param_pack(*manifest.calib_path) : default_param_pack();

    Trace trace;
    if (manifest.trace_path) {
        trace = read_trace_file(*manifest.trace_path);
    } else {
        trace = generate_synthetic(*manifest.synthetic);
    }
    if (trace.empty()) throw DataError("trace is empty");

    const auto min_len = sweep_hotspot_len(manifest.min_hotspot_lens);
    const auto partition = identify_hotspots(trace, manifest.hot_exec_threshold, min_len);

    std::vector<PatternKind> patterns;
    for (const auto& p : manifest.patterns) patterns.push_back(pattern_from_name(p, *manifest.seed));
    const auto configs = configs_for_modes(manifest.modes, pack);

    SweepOutputs out;
    out.result = run_sweep(trace, partition, configs, patterns, pack, {manifest.threads});
    if (out.result.rows.empty()) {
        const auto why = out.result.failures.empty() ? std::string("no rows") : out.result.failures.front().message;
        throw DataError("every sweep row failed: " + why);
    }

    std::error_code ec;
    fs::create_directories(manifest.out_dir, ec);
    if (ec) throw DataError("cannot create output directory '" + manifest.out_dir + "': " + ec.message());
    const fs::path dir(manifest.out_dir);
    out.csv_path = (dir / "sweep.csv").string();
    out.pareto_csv_path = (dir / "pareto.csv").string();
    out.summary_path = (dir / "summary.txt").string();

    write_file(out.csv_path, sweep_csv(out.result.rows));
    std::vector<SweepRow> optimal;
    for (const auto& r : out.result.rows)
        if (r.area_optimal || r.energy_optimal) optimal.push_back(r);
    write_file(out.pareto_csv_path, sweep_csv(optimal));
    out.summary = format_summary(out.result, manifest, min_len);
    write_file(out.summary_path, out.summary);
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Heterogeneous CPU+accelerator MMU simulator and design-space explorer"};
    app.require_subcommand(1);

    std::string spec_path, out_path, trace_path, csv_path, manifest_path, calib_path;
    std::optional<std::uint64_t> seed;
    std::uint64_t hot_threshold = 100;
    std::vector<std::uint64_t> min_hotspot;
    std::vector<std::string> patterns, modes;
    unsigned threads = 0;

    auto* gen = app.add_subcommand("gen-trace", "Write a synthetic trace in the text (or .bin) format");
    gen->add_option("--spec", spec_path, "Synthetic spec JSON")->required();
    gen->add_option("--out", out_path, "Output trace path")->required();
    gen->add_option("--seed", seed, "Override the spec's seed");

    auto* hot = app.add_subcommand("hotspots", "Accelerated fraction for each minimum hotspot length");
    auto* hot_trace = hot->add_option("--trace", trace_path, "Trace file");
    hot->add_option("--spec", spec_path, "Synthetic spec JSON instead of a trace")->excludes(hot_trace);
    hot->add_option("--hot-threshold", hot_threshold, "A pc is hot if it executes more than this many times");
    hot->add_option("--min-hotspot", min_hotspot, "Minimum hotspot lengths")->delimiter(',')->required();
    hot->add_option("--out", csv_path, "Also write the table as CSV");

    auto* sweep = app.add_subcommand("sweep", "Run the design-space sweep");
    sweep->add_option("--manifest", manifest_path, "Run manifest JSON; flags override its fields");
    sweep->add_option("--trace", trace_path, "Trace file");
    sweep->add_option("--spec", spec_path, "Synthetic spec JSON");
    sweep->add_option("--calib", calib_path, "Calibration / parameter pack JSON");
    sweep->add_option("--hot-threshold", hot_threshold, "Hot pc execution threshold");
    sweep->add_option("--min-hotspot", min_hotspot, "Minimum hotspot lengths (the middle one is swept)")
        ->delimiter(',');
    sweep->add_option("--pattern", patterns, "program, random or sorted (repeatable)")
        ->check(CLI::IsMember({"program", "random", "sorted"}))
        ->delimiter(',');
    sweep->add_option("--mode", modes, "local, remote or remote-filtered (repeatable)")
        ->check(CLI::IsMember({"local", "remote", "remote-filtered"}))
        ->delimiter(',');
    sweep->add_option("--seed", seed, "Seed for random reference order");
    sweep->add_option("--out", out_path, "Output directory");
    sweep->add_option("--threads", threads, "Worker threads (0: all cores)");

    app.add_subcommand("params", "Print the placeholder parameter pack as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed()) {
            auto spec = load_synthetic_spec(spec_path);
            if (seed) spec.seed = *seed;
            const auto trace = cmd_gen_trace(spec, out_path);
            std::cout << fmt::format("wrote {} records ({} with data references) to {}\n", trace.size(),
                                     trace.memory_refs(), out_path);
        } else if (hot->parsed()) {
            if (trace_path.empty() && spec_path.empty()) throw UsageError("hotspots needs --trace or --spec");
            const auto trace =
                trace_path.empty() ? generate_synthetic(load_synthetic_spec(spec_path)) : read_trace_file(trace_path);
            const auto rows = hotspot_table(trace, hot_threshold, min_hotspot);
            print_hotspot_table(std::cout, rows);
            if (!csv_path.empty()) {
                std::ostringstream csv;
                write_hotspot_csv(csv, rows);
                write_file(csv_path, csv.str());
            }
        } else if (sweep->parsed()) {
            RunManifest m = manifest_path.empty() ? RunManifest{} : load_manifest(manifest_path);
            if (!trace_path.empty()) {
                m.trace_path = trace_path;
                m.synthetic.reset();
            }
            if (!spec_path.empty()) {
                m.synthetic = load_synthetic_spec(spec_path);
                m.trace_path.reset();
            }
            if (!calib_path.empty()) m.calib_path = calib_path;
            if (sweep->count("--hot-threshold")) m.hot_exec_threshold = hot_threshold;
            if (!min_hotspot.empty()) m.min_hotspot_lens = min_hotspot;
            if (!patterns.empty()) m.patterns = patterns;
            if (!modes.empty()) m.modes = modes;
            if (seed) m.seed = seed;
            if (!out_path.empty()) m.out_dir = out_path;
            if (threads != 0) m.threads = threads;
            const auto out = cmd_sweep(m);
            std::cout << out.summary;
            for (const auto& f : out.result.failures)
                std::cerr << fmt::format("warning: {} [{}] failed: {}\n", f.config_id, f.pattern, f.message);
        } else {
            std::cout << param_pack_to_json(default_param_pack());
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}

}  // namespace hmmu::cli
