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
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hmmu/cli.hpp"
#include "hmmu/dse.hpp"
#include "hmmu/error.hpp"
#include "hmmu/params.hpp"

namespace py = pybind11;
using namespace hmmu;

namespace {

std::vector<std::tuple<std::uint64_t, std::optional<std::uint64_t>>> trace_records(const Trace& t) {
    std::vector<std::tuple<std::uint64_t, std::optional<std::uint64_t>>> out;
    out.reserve(t.records.size());
    for (const auto& r : t.records) out.emplace_back(r.pc, r.data_vaddr);
    return out;
}

Trace trace_from_records(const std::vector<std::tuple<std::uint64_t, std::optional<std::uint64_t>>>& records) {
    Trace t;
    for (const auto& [pc, va] : records) t.records.push_back({pc, va});
    return t;
}

std::string segment_kind(SegmentKind k) { return k == SegmentKind::Acc ? "acc" : "cpu"; }

MmuConfig mmu_from(const ParamPack& pack, std::optional<std::pair<std::uint32_t, std::uint32_t>> l1,
                   std::optional<std::uint32_t> l2_entries, std::uint32_t threads) {
    MmuConfig c{"py", std::nullopt, std::nullopt, pack.ptw(threads)};
    if (l1) c.l1 = pack.tlb(l1->first, l1->second);
    if (l2_entries) c.l2 = pack.tlb(*l2_entries, 4);
    return c;
}

py::dict stats_dict(const MmuStats& s) {
    py::dict d;
    d["refs"] = s.refs;
    d["l1_probes"] = s.l1_probes;
    d["l1_hits"] = s.l1_hits;
    d["l2_probes"] = s.l2_probes;
    d["l2_hits"] = s.l2_hits;
    d["walks"] = s.walks;
    d["remote_probes"] = s.remote_probes;
    d["mmu_time_ns"] = s.mmu_time_ns;
    d["mmu_energy_pj"] = s.mmu_energy_pj;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heterogeneous CPU+accelerator MMU simulator";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<cli::UsageError>(m, "UsageError", PyExc_ValueError);

    m.def(
        "parse_trace",
        [](const std::string& text) { return trace_records(parse_trace_string(text)); }, py::arg("text"),
        "Parse trace text into a list of (pc, va or None).");
    m.def(
        "format_trace", [](const decltype(trace_records(Trace{}))& records) { return format_trace(trace_from_records(records)); },
        py::arg("records"));
    m.def(
        "generate_trace", [](const std::string& spec_json) { return format_trace(generate_synthetic(cli::parse_synthetic_spec(spec_json))); },
        py::arg("spec_json"), "Synthetic trace text from a JSON spec.");

    m.def(
        "identify_hotspots",
        [](const std::string& trace_text, std::uint64_t hot_threshold, std::uint64_t min_len) {
            const auto p = identify_hotspots(parse_trace_string(trace_text), hot_threshold, min_len);
            std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
            for (const auto& s : p.segments) out.emplace_back(segment_kind(s.kind), s.start, s.end);
            return out;
        },
        py::arg("trace_text"), py::arg("hot_threshold"), py::arg("min_len"),
        "Segments as (kind, start, end) with inclusive ends.");
    m.def(
        "accelerated_fraction",
        [](const std::string& trace_text, std::uint64_t hot_threshold, std::uint64_t min_len) {
            return accelerated_fraction(identify_hotspots(parse_trace_string(trace_text), hot_threshold, min_len));
        },
        py::arg("trace_text"), py::arg("hot_threshold"), py::arg("min_len"));
    m.def(
        "apply_pattern",
        [](const std::vector<Vpn>& vpns, const std::string& name, std::uint64_t seed) {
            return apply_pattern(vpns, pattern_from_name(name, seed));
        },
        py::arg("vpns"), py::arg("pattern"), py::arg("seed") = 0);

    m.def("amdahl_bound", &amdahl_bound, py::arg("f"), py::arg("speedup"));
    m.def("vpn_of", &vpn_of, py::arg("addr"));

    py::class_<Tlb>(m, "Tlb")
        .def(py::init([](std::uint32_t entries, std::uint32_t ways) {
                 return Tlb(TlbConfig{entries, ways, 0.0, 0.0, 0.0});
             }),
             py::arg("entries"), py::arg("ways"))
        .def("lookup", [](Tlb& t, Vpn v) { return t.lookup(v) == TlbResult::Hit; }, py::arg("vpn"))
        .def("fill", &Tlb::fill, py::arg("vpn"))
        .def("contains", &Tlb::contains, py::arg("vpn"))
        .def("set_contents", &Tlb::set_contents, py::arg("set"));

    m.def(
        "simulate_local",
        [](const std::vector<std::pair<Vpn, double>>& refs, std::optional<std::pair<std::uint32_t, std::uint32_t>> l1,
           std::optional<std::uint32_t> l2_entries, std::uint32_t threads) {
            std::vector<TimedRef> timed;
            for (const auto& [v, t] : refs) timed.push_back({v, t});
            return stats_dict(simulate_local(timed, mmu_from(default_param_pack(), l1, l2_entries, threads)));
        },
        py::arg("refs"), py::arg("l1") = py::none(), py::arg("l2_entries") = py::none(), py::arg("threads") = 1,
        "Accelerator-style MMU over (vpn, issue_ns) pairs with placeholder component parameters.");

    m.def("pareto_front", [](const std::vector<double>& xs, const std::vector<double>& ys) { return pareto_front(xs, ys); },
          py::arg("xs"), py::arg("ys"));

    m.def("config_counts", [] {
        const auto pack = default_param_pack();
        py::dict d;
        d["accelerator"] = enumerate_accel_configs(pack).size();
        d["cpu"] = enumerate_cpu_configs(pack).size();
        d["system"] = enumerate_system_configs(pack).size();
        return d;
    });
    m.def("default_params", [] { return param_pack_to_json(default_param_pack()); });

    m.def(
        "sweep",
        [](const std::string& manifest_json, const std::string& base_dir) {
            cli::SweepOutputs out;
            {
                py::gil_scoped_release release;
                out = cli::cmd_sweep(cli::parse_manifest(manifest_json, base_dir));
            }
            py::dict d;
            d["csv"] = sweep_csv(out.result.rows);
            d["summary"] = out.summary;
            d["csv_path"] = out.csv_path;
            d["failures"] = out.result.failures.size();
            d["accelerated_fraction"] = out.result.accelerated_fraction;
            d["amdahl_bound"] = out.result.amdahl_bound;
            return d;
        },
        py::arg("manifest_json"), py::arg("base_dir") = "",
        "Run a sweep from manifest JSON; writes the usual files into its output directory.");
}
