#pragma once

#include <cmath>
#include <cstdint>

// Self-contained counter-seeded RNG. Trials derive their own stream from
// (master seed, trial index), so results do not depend on how trials are
// distributed over worker threads, and identical seeds give bit-identical
// output on every run.

namespace loewner {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    // Stream for one trial of one named check. The tag keeps different
    // operations from sharing a stream even at equal (seed, index).
    static Rng for_trial(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
        std::uint64_t x = seed ^ (0x632be59bd9b4e019ULL * (tag + 1));
        std::uint64_t y = splitmix64(x) ^ (index * 0x9e3779b97f4a7c15ULL);
        return Rng(splitmix64(y));
    }

    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9; // xoshiro256**
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; includes the right endpoint.
    double uniform01_open_lo() { return 1.0 - uniform01(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Basic Box-Muller; one value per call, no cached spare.
    double normal() {
        double u1 = uniform01_open_lo();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t s_[4];
};

} // namespace loewner
