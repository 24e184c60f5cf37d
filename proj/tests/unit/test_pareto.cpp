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
#include "doctest.h"
#include "oracles.hpp"

#include "hmmu/dse.hpp"
#include "hmmu/error.hpp"
#include "hmmu/rng.hpp"

using namespace hmmu;

TEST_CASE("dominance is strict in one coordinate") {
    CHECK(dominates(1, 1, 2, 2));
    CHECK(dominates(1, 2, 1, 3));
    CHECK_FALSE(dominates(1, 1, 1, 1));
    CHECK_FALSE(dominates(1, 3, 2, 2));
}

TEST_CASE("small frontier examples") {
    const std::vector<double> xs{1, 2, 3}, ys{10, 5, 6};
    CHECK(pareto_front(xs, ys) == std::vector<std::size_t>{0, 1});
    const std::vector<double> one{4};
    CHECK(pareto_front(one, one) == std::vector<std::size_t>{0});
    const std::vector<double> dx{1, 1, 2}, dy{3, 3, 1};
    CHECK(pareto_front(dx, dy) == std::vector<std::size_t>{0, 1, 2});
    const std::vector<double> empty;
    CHECK_THROWS_AS(pareto_front(empty, empty), DataError);
}

TEST_CASE("frontier matches the quadratic check on random clouds") {
    Xorshift64Star rng(99);
    for (int iter = 0; iter < 300; ++iter) {
        const auto n = 1 + rng.below(80);
        const auto grid = 1 + rng.below(20);  // coarse grids force ties
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(static_cast<double>(rng.below(grid)));
            ys.push_back(static_cast<double>(rng.below(grid)));
        }
        CHECK(oracle::brute_force_front_ok(xs, ys, pareto_front(xs, ys)));
    }
}

TEST_CASE("row-level pareto and split") {
    auto row = [](std::string id, double area_cpu, double area_acc, double energy, double runtime) {
        SweepRow r;
        r.config_id = std::move(id);
        r.pattern = "program";
        r.cost.area_mm2 = {area_cpu, area_acc};
        r.cost.energy_pj = {energy, 0.0};
        r.cost.runtime_ns = runtime;
        return r;
    };
    std::vector<SweepRow> rows{row("a", 0.2, 0.1, 50, 10), row("b", 0.1, 0.1, 100, 20), row("c", 0.3, 0.3, 40, 30)};
    const auto by_area = pareto(rows, CostMetric::Area);
    REQUIRE(by_area.size() == 2);
    CHECK(by_area[0].config_id == "a");
    CHECK(by_area[0].area == doctest::Approx(0.3));
    CHECK(by_area[0].both());
    CHECK(by_area[1].config_id == "b");
    CHECK_FALSE(by_area[1].energy_optimal);

    annotate_pareto(rows);
    CHECK(rows[0].area_optimal);
    CHECK(rows[0].energy_optimal);
    CHECK(rows[1].area_optimal);
    CHECK_FALSE(rows[2].area_optimal);
    CHECK(rows[2].energy_optimal);

    const auto split = split_breakdown(rows);
    CHECK(split.size() == 3);
    for (std::size_t i = 0; i < split.size(); ++i) {
        CHECK(split[i].cpu_area + split[i].acc_area == rows[i].cost.area_mm2.total());
        CHECK(split[i].cpu_energy + split[i].acc_energy == rows[i].cost.energy_pj.total());
    }
}

TEST_CASE("flags are computed per pattern") {
    SweepRow fast, slow;
    fast.config_id = slow.config_id = "x";
    fast.pattern = "sorted";
    slow.pattern = "random";
    fast.cost.runtime_ns = 1;
    slow.cost.runtime_ns = 5;
    fast.cost.area_mm2 = slow.cost.area_mm2 = {1, 1};
    std::vector<SweepRow> rows{fast, slow};
    annotate_pareto(rows);
    CHECK(rows[0].area_optimal);
    CHECK(rows[1].area_optimal);
}
