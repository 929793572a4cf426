#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <string_view>

namespace gewi {

// splitmix64, used for seed mixing and derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// FNV-1a over a string key. Sweep points hash their parameter string with
// this, so adding new points to a sweep never shifts the seeds of
// existing ones.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Per-run seed from (master seed, sweep-point key, repetition index).
inline std::uint64_t derive_run_seed(std::uint64_t master, std::string_view point_key,
                                     std::uint64_t rep) {
    std::uint64_t s = splitmix64(master ^ fnv1a64(point_key));
    return splitmix64(s + rep * 0x9E3779B97F4A7C15ULL);
}

// Seeded generator wrapping mt19937_64. Distribution code is hand-rolled
// (not std::uniform_real_distribution) so that a given seed produces the
// same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // one random bit
    std::uint8_t bit() { return static_cast<std::uint8_t>(gen_() >> 63); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // modulo bias is < 2^-40 for the n used here (tiny ranges)
        return gen_() % n;
    }

    // standard normal via Box-Muller (stateless: two uniforms per draw)
    double gauss() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace gewi
