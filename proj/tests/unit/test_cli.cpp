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
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "hmmu/cli.hpp"
#include "hmmu/error.hpp"
#include "hmmu/params.hpp"

using namespace hmmu;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("hmmu_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

SyntheticSpec hundred(double ratio) {
    SyntheticSpec s;
    s.instr_count = 100;
    s.mem_ref_ratio = ratio;
    s.working_set_pages = 10;
    s.seed = 4;
    return s;
}

}  // namespace

TEST_CASE("gen-trace writes one line per instruction") {
    TempDir dir;
    cli::cmd_gen_trace(hundred(0.5), dir / "a.trace");
    const auto lines = data_lines(slurp(dir / "a.trace"));
    CHECK(lines.size() == 100);
    CHECK(std::ranges::count_if(lines, [](const std::string& l) { return l.find("va=") != std::string::npos; }) == 50);
    cli::cmd_gen_trace(hundred(0.5), dir / "b.trace");
    CHECK(slurp(dir / "a.trace") == slurp(dir / "b.trace"));
    CHECK(read_trace_file(dir / "a.trace").size() == 100);
}

TEST_CASE("gen-trace binary output round-trips") {
    TempDir dir;
    const auto trace = cli::cmd_gen_trace(hundred(0.3), dir / "t.bin");
    CHECK(read_trace_file(dir / "t.bin").records == trace.records);
}

TEST_CASE("gen-trace reports an unwritable path") {
    CHECK_THROWS_AS(cli::cmd_gen_trace(hundred(0.5), "/nonexistent-dir/x/y.trace"), DataError);
}

TEST_CASE("hotspot table") {
    SyntheticSpec s;
    s.instr_count = 20000;
    s.mem_ref_ratio = 0.2;
    s.working_set_pages = 50;
    s.seed = 2;
    const auto trace = generate_synthetic(s);
    const auto rows = cli::hotspot_table(trace, 30, {200, 20, 60});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].min_hotspot_len == 20);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].accelerated_fraction <= rows[i - 1].accelerated_fraction);
    CHECK(rows[0].accelerated_fraction > 0.0);
    const auto huge = cli::hotspot_table(trace, 30, {trace.size() + 1});
    CHECK(huge[0].accelerated_fraction == 0.0);
    std::ostringstream csv;
    cli::write_hotspot_csv(csv, rows);
    CHECK(std::ranges::count(csv.str(), '\n') == 4);
}

TEST_CASE("middle hotspot length") {
    CHECK(cli::sweep_hotspot_len({300, 100, 200}) == 200);
    CHECK(cli::sweep_hotspot_len({7}) == 7);
    CHECK(cli::sweep_hotspot_len({1, 2}) == 1);
    CHECK_THROWS_AS(cli::sweep_hotspot_len({}), cli::UsageError);
}

TEST_CASE("synthetic spec JSON") {
    const auto s = cli::parse_synthetic_spec(
        R"({"instr_count": 10, "mem_ref_ratio": 0.5, "working_set_pages": 4, "locality": {"kind": "zipf", "exponent": 1.2}, "seed": 9})");
    CHECK(s.instr_count == 10);
    CHECK(std::get<ZipfLocality>(s.locality).exponent == 1.2);
    CHECK(s.seed == 9);
    CHECK(std::holds_alternative<UniformLocality>(
        cli::parse_synthetic_spec(R"({"instr_count": 1, "mem_ref_ratio": 0, "working_set_pages": 1, "locality": "uniform"})")
            .locality));
    CHECK_THROWS_AS(cli::parse_synthetic_spec(R"({"instr_count": 1})"), DataError);
    CHECK_THROWS_AS(cli::parse_synthetic_spec(
                        R"({"instr_count": 1, "mem_ref_ratio": 0, "working_set_pages": 1, "locality": "spiral"})"),
                    DataError);
}

TEST_CASE("manifest parsing and validation") {
    TempDir dir;
    {
        std::ofstream(dir / "spec.json") << R"({"instr_count": 100, "mem_ref_ratio": 0.5, "working_set_pages": 8})";
    }
    const std::string text = R"({"spec": "spec.json", "min_hotspot": [5, 10, 20], "patterns": ["sorted"],
                                 "modes": ["remote"], "out": "o", "seed": 3, "hot_threshold": 4})";
    {
        std::ofstream(dir / "m.json") << text;
    }
    const auto m = cli::load_manifest(dir / "m.json");
    CHECK(m.synthetic.has_value());
    CHECK(m.synthetic->instr_count == 100);
    CHECK(m.min_hotspot_lens == std::vector<std::uint64_t>{5, 10, 20});
    CHECK(m.patterns == std::vector<std::string>{"sorted"});
    CHECK(m.modes == std::vector<std::string>{"remote"});
    CHECK(m.hot_exec_threshold == 4);
    CHECK(fs::path(m.out_dir) == dir.path / "o");
    CHECK_NOTHROW(m.validate());

    auto no_seed = m;
    no_seed.seed.reset();
    CHECK_THROWS_AS(no_seed.validate(), cli::UsageError);
    auto bad_pattern = m;
    bad_pattern.patterns = {"diagonal"};
    CHECK_THROWS_AS(bad_pattern.validate(), cli::UsageError);
    auto bad_mode = m;
    bad_mode.modes = {"teleport"};
    CHECK_THROWS_AS(bad_mode.validate(), cli::UsageError);
    auto missing_trace = m;
    missing_trace.synthetic.reset();
    missing_trace.trace_path = dir / "absent.trace";
    CHECK_THROWS_AS(missing_trace.validate(), DataError);
    auto nothing = m;
    nothing.synthetic.reset();
    CHECK_THROWS_AS(nothing.validate(), cli::UsageError);
    CHECK_THROWS_AS(cli::parse_manifest("{ not json"), DataError);
}

TEST_CASE("small sweep writes all outputs") {
    TempDir dir;
    cli::RunManifest m;
    SyntheticSpec s;
    s.instr_count = 5000;
    s.mem_ref_ratio = 0.3;
    s.working_set_pages = 100;
    m.synthetic = s;
    m.hot_exec_threshold = 20;
    m.min_hotspot_lens = {40};
    m.patterns = {"program", "random"};
    m.modes = {"remote", "remote-filtered"};
    m.out_dir = dir / "out";
    m.seed = 5;
    const auto out = cli::cmd_sweep(m);
    CHECK(out.result.rows.size() == 2 * 18);
    const auto csv = slurp(out.csv_path);
    CHECK(std::ranges::count(csv, '\n') == 37);
    CHECK(slurp(out.summary_path) == out.summary);
    CHECK(out.summary.find("amdahl_bound") != std::string::npos);
    const auto pareto = slurp(out.pareto_csv_path);
    CHECK(std::ranges::count(pareto, '\n') >= 3);

    m.out_dir = dir / "out2";
    const auto again = cli::cmd_sweep(m);
    CHECK(slurp(again.csv_path) == csv);
}

TEST_CASE("shipped placeholder parameters equal the built-in pack") {
    const auto shipped = load_param_pack(std::string(HMMU_SOURCE_DIR) + "/configs/placeholder_params.json");
    CHECK(param_pack_to_json(shipped) == param_pack_to_json(default_param_pack()));
}

TEST_CASE("parameter pack JSON round-trips and validates") {
    const auto pack = default_param_pack();
    CHECK(param_pack_to_json(parse_param_pack(param_pack_to_json(pack))) == param_pack_to_json(pack));
    CHECK_THROWS_AS(parse_param_pack(R"({"cpi_app": 1})"), DataError);
}
