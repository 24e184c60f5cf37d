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
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "hmmu/error.hpp"
#include "hmmu/rng.hpp"
#include "hmmu/trace.hpp"

namespace hmmu {

namespace {

constexpr std::uint64_t kEpilogueLength = 4;
constexpr std::uint64_t kPageBytes = 4096;

// Picks the working-set page index of each successive data reference.
class PageSampler {
public:
    PageSampler(const Locality& locality, std::uint64_t pages, std::uint64_t seed)
        : locality_(locality), pages_(pages), rng_(seed) {
        if (const auto* z = std::get_if<ZipfLocality>(&locality_)) {
            cdf_.resize(pages_);
            double sum = 0.0;
            for (std::uint64_t r = 0; r < pages_; ++r) {
                sum += 1.0 / std::pow(static_cast<double>(r + 1), z->exponent);
                cdf_[r] = sum;
            }
            for (auto& c : cdf_) c /= sum;
            // Scatter popular ranks over the working set.
            rank_to_page_.resize(pages_);
            std::iota(rank_to_page_.begin(), rank_to_page_.end(), std::uint64_t{0});
            shuffle(std::span<std::uint64_t>(rank_to_page_), rng_);
        }
    }

    std::uint64_t next() {
        const auto k = count_++;
        if (const auto* s = std::get_if<StrideLocality>(&locality_))
            return static_cast<std::uint64_t>((static_cast<unsigned __int128>(k) * s->pages) % pages_);
        if (std::holds_alternative<UniformLocality>(locality_)) return rng_.below(pages_);
        const double u = rng_.unit();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const auto rank = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), pages_ - 1);
        return rank_to_page_[rank];
    }

    std::uint64_t offset() { return rng_.below(kPageBytes / 8) * 8; }

private:
    Locality locality_;
    std::uint64_t pages_;
    Xorshift64Star rng_;
    std::uint64_t count_ = 0;
    std::vector<double> cdf_;
    std::vector<std::uint64_t> rank_to_page_;
};

void validate(const SyntheticSpec& spec, std::uint64_t refs) {
    if (spec.instr_count == 0) throw DataError("synthetic spec: instr_count must be > 0");
    if (!(spec.mem_ref_ratio >= 0.0 && spec.mem_ref_ratio <= 1.0))
        throw DataError("synthetic spec: mem_ref_ratio must lie in [0, 1]");
    if (refs > 0 && spec.working_set_pages == 0)
        throw DataError("synthetic spec: zero working set with nonzero memory reference ratio");
    if (kDataBaseVpn + spec.working_set_pages >= (kColdCodeBase >> 12))
        throw DataError("synthetic spec: working set too large for the address layout");
    if (spec.loop_pcs == 0 || spec.loop_iterations == 0)
        throw DataError("synthetic spec: loop_pcs and loop_iterations must be > 0");
    if (const auto* z = std::get_if<ZipfLocality>(&spec.locality); z && !(z->exponent > 0.0))
        throw DataError("synthetic spec: zipf exponent must be > 0");
}

}  // namespace

Trace generate_synthetic(const SyntheticSpec& spec) {
    const auto n = spec.instr_count;
    const auto refs = static_cast<std::uint64_t>(std::llround(spec.mem_ref_ratio * static_cast<double>(n)));
    validate(spec, refs);

    Trace trace;
    trace.name = fmt::format("synthetic-{}", spec.seed);
    trace.records.reserve(n);

    Xorshift64Star structure(spec.seed);
    Addr next_cold_pc = kColdCodeBase;
    auto emit_cold = [&](std::uint64_t count) {
        for (std::uint64_t i = 0; i < count && trace.records.size() < n; ++i) {
            trace.records.push_back({next_cold_pc, std::nullopt});
            next_cold_pc += 4;
        }
    };

    emit_cold(n / 8);
    while (trace.records.size() < n) {
        const auto trips = 1 + structure.below(2 * spec.loop_iterations - 1);
        for (std::uint64_t t = 0; t < trips && trace.records.size() < n; ++t)
            for (std::uint64_t j = 0; j < spec.loop_pcs && trace.records.size() < n; ++j)
                trace.records.push_back({kHotCodeBase + 4 * j, std::nullopt});
        emit_cold(kEpilogueLength);
    }

    if (refs == 0) return trace;
    PageSampler sampler(spec.locality, spec.working_set_pages,
                        Xorshift64Star::splitmix64(spec.seed ^ 0xDA7A5EEDULL));
    using u128 = unsigned __int128;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto before = static_cast<u128>(i) * refs / n;
        const auto after = static_cast<u128>(i + 1) * refs / n;
        if (after == before) continue;
        const Vpn vpn = kDataBaseVpn + sampler.next();
        trace.records[i].data_vaddr = (vpn << 12) | sampler.offset();
    }
    return trace;
}

}  // namespace hmmu
