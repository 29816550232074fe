#include "bp/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bp {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next_u64()); // full 64-bit span
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % range);
}

double Rng::gaussian(double mean, double stddev) {
    // u1 in (0,1] so log() is finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + stddev * z;
}

int Rng::poisson(double lambda) {
    if (lambda < 0) throw std::invalid_argument("poisson: negative lambda");
    if (lambda == 0) return 0;
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01();
    } while (p > limit);
    return k - 1;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}
} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (a + 0x9E3779B97F4A7C15ull));
    h = splitmix64(h ^ (b + 0xD1B54A32D192ED03ull));
    h = splitmix64(h ^ (c + 0x8CB92BA72F3D8DD7ull));
    return h;
}

} // namespace bp
