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
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "hmmu/dse.hpp"
#include "hmmu/error.hpp"

namespace hmmu {

bool dominates(double ax, double ay, double bx, double by) {
    return ax <= bx && ay <= by && (ax < bx || ay < by);
}

std::vector<std::size_t> pareto_front(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty()) throw DataError("Pareto analysis needs at least one point");
    if (xs.size() != ys.size()) throw DataError("Pareto coordinates differ in length");

    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return xs[a] != xs[b] ? xs[a] < xs[b] : (ys[a] != ys[b] ? ys[a] < ys[b] : a < b);
    });

    // Walk groups of equal x. Only a group's minimum-y points can survive,
    // and only if nothing with smaller x reaches as low.
    std::vector<std::size_t> front;
    double best_y_left = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < order.size();) {
        std::size_t h = g;
        while (h < order.size() && xs[order[h]] == xs[order[g]]) ++h;
        const double group_min = ys[order[g]];
        if (group_min < best_y_left)
            for (std::size_t k = g; k < h && ys[order[k]] == group_min; ++k) front.push_back(order[k]);
        best_y_left = std::min(best_y_left, group_min);
        g = h;
    }
    std::sort(front.begin(), front.end());
    return front;
}

namespace {

double metric_of(const SweepRow& row, CostMetric metric) {
    return metric == CostMetric::Area ? row.cost.area_mm2.total() : row.cost.energy_pj.total();
}

std::vector<bool> front_mask(std::span<const SweepRow> rows, CostMetric metric) {
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        xs.push_back(metric_of(r, metric));
        ys.push_back(r.cost.runtime_ns);
    }
    std::vector<bool> mask(rows.size(), false);
    for (const auto i : pareto_front(xs, ys)) mask[i] = true;
    return mask;
}

}  // namespace

std::vector<ParetoPoint> pareto(std::span<const SweepRow> rows, CostMetric x_metric) {
    const auto area = front_mask(rows, CostMetric::Area);
    const auto energy = front_mask(rows, CostMetric::Energy);
    const auto& selected = x_metric == CostMetric::Area ? area : energy;
    std::vector<ParetoPoint> points;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!selected[i]) continue;
        const auto& r = rows[i];
        points.push_back({r.config_id, r.cost.runtime_ns, r.cost.area_mm2.total(), r.cost.energy_pj.total(),
                          area[i], energy[i]});
    }
    return points;
}

void annotate_pareto(std::vector<SweepRow>& rows) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < rows.size(); ++i) groups[rows[i].pattern].push_back(i);
    for (const auto& [pattern, members] : groups) {
        std::vector<SweepRow> subset;
        subset.reserve(members.size());
        for (const auto i : members) subset.push_back(rows[i]);
        const auto area = front_mask(subset, CostMetric::Area);
        const auto energy = front_mask(subset, CostMetric::Energy);
        for (std::size_t k = 0; k < members.size(); ++k) {
            rows[members[k]].area_optimal = area[k];
            rows[members[k]].energy_optimal = energy[k];
        }
    }
}

std::vector<SplitRow> split_breakdown(std::span<const SweepRow> rows) {
    std::vector<SplitRow> out;
    for (const auto& r : rows) {
        if (!r.area_optimal && !r.energy_optimal) continue;
        out.push_back({r.config_id, r.pattern, r.cost.area_mm2.cpu, r.cost.area_mm2.acc, r.cost.energy_pj.cpu,
                       r.cost.energy_pj.acc});
    }
    return out;
}

namespace {

std::string tlb_field(const std::optional<TlbConfig>& tlb) { return tlb ? tlb->label() : "none"; }

}  // namespace

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        const auto& s = r.system;
        std::string acc_l1 = "none", acc_l2 = "none";
        std::uint32_t threads = 0;
        if (s.accel) {
            acc_l1 = tlb_field(s.accel->l1);
            acc_l2 = tlb_field(s.accel->l2);
            threads = s.accel->ptw.threads;
        } else if (const auto* f = std::get_if<RemoteFiltered>(&s.mode)) {
            acc_l1 = f->filter.label();
        }
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.config_id,
                           tlb_field(s.cpu.l1), tlb_field(s.cpu.l2), acc_l1, acc_l2, threads, mode_name(s.mode),
                           r.pattern, r.cost.runtime_ns, r.cost.normalized_runtime, r.cost.area_mm2.cpu,
                           r.cost.area_mm2.acc, r.cost.energy_pj.cpu, r.cost.energy_pj.acc, r.l1_hit_rate,
                           r.l2_hit_rate, r.walks, r.area_optimal ? 1 : 0, r.energy_optimal ? 1 : 0);
    }
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::ostringstream out;
    write_sweep_csv(out, rows);
    return out.str();
}

}  // namespace hmmu
