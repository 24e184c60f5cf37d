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

#ifndef HMMU_RNG_HPP
#define HMMU_RNG_HPP

#include <cstdint>
#include <span>
#include <utility>

namespace hmmu {

/**
 * xorshift64* generator. Every random decision in the simulator goes through
 * this type so that traces and shuffles are reproducible bit-for-bit by any
 * implementation:
 *
 *   state_0 = splitmix64(seed), replaced by 1 if zero
 *   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27
 *   output = x * 0x2545F4914F6CDD1D  (mod 2^64)
 *
 * splitmix64(z): z += 0x9E3779B97F4A7C15;
 *                z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
 *                z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
 *                return z ^ (z >> 31)
 *
 * below(n) draws an unbiased integer in [0, n) by rejecting raw outputs
 * smaller than (2^64 - n) mod n and returning output mod n.
 * unit() returns (output >> 11) * 2^-53, a double in [0, 1).
 */
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
        if (state_ == 0) state_ = 1;
    }

    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static std::uint64_t splitmix64(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Fisher-Yates, walking i from the back: swap(v[i], v[below(i + 1)]).
template <typename T>
void shuffle(std::span<T> values, Xorshift64Star& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        using std::swap;
        swap(values[i - 1], values[j]);
    }
}

}  // namespace hmmu

#endif
