#pragma once

#include <cstdint>
#include <random>

namespace bp {

// Deterministic random source. All samplers are implemented on top of raw
// mt19937_64 output instead of std::*_distribution, so that a given seed
// produces the same stream on every toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Box-Muller transform; consumes two draws per call.
    double gaussian(double mean, double stddev);

    // Knuth's product-of-uniforms method; intended for small lambda (<= ~30).
    int poisson(double lambda);

private:
    std::mt19937_64 gen_;
};

// Stable seed derivation for independent substreams (per instance, per
// purpose). splitmix64-style mixing of the master seed with up to three tags.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

} // namespace bp
