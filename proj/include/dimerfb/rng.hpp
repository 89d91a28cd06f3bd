// Copyright 2026 The dimerfb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIMERFB_RNG_HPP_
#define DIMERFB_RNG_HPP_

// Random-number generation for the stochastic integrator.
//
// Everything here is hand-rolled on purpose: trajectory results are
// contractually bit-reproducible from (master_seed, trajectory_index) across
// platforms and thread counts, and neither std::mt19937_64's seeding helpers
// nor std::normal_distribution have implementation-pinned output. The
// generator is xoshiro256** (Blackman & Vigna), seeded through splitmix64 as
// its authors recommend; normals come from a plain Box-Muller transform.

#include <array>
#include <cmath>
#include <cstdint>

namespace dimerfb {

// splitmix64: a strong 64-bit mixing bijection used purely for seeding.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256**: 256-bit state, period 2^256 - 1, passes BigCrush.
class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
        // All-zero state is the one forbidden point; splitmix64 output makes
        // it astronomically unlikely, but guard anyway.
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[3] = 1;
    }

    // Stream for one trajectory: master seed and index are mixed through
    // splitmix64, so neighbouring indices land in unrelated state regions
    // and the assignment is independent of scheduling.
    static Xoshiro256ss for_trajectory(std::uint64_t master_seed, std::uint64_t index) {
        return Xoshiro256ss(master_seed + 0x9E3779B97F4A7C15ULL * (index + 1));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the spare sample is cached so draws
    // cost one transform per pair.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);  // log(0) guard; rejected with probability 2^-53
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Wiener increment over a step of length dt: Gaussian with mean 0 and
// variance dt.
inline double wiener_increment(Xoshiro256ss& rng, double dt) {
    return rng.next_normal() * std::sqrt(dt);
}

}  // namespace dimerfb

#endif  // DIMERFB_RNG_HPP_
