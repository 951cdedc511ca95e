#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

// Portable random streams. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard. Distributions are implemented here
// because the std:: distributions are implementation-defined.
//
// Stream splitting: substream k of a seed s is an mt19937_64 seeded with
// splitmix64(s ^ (k * 0x9E3779B97F4A7C15)).

namespace mlgcp {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(splitmix64(seed ^ (stream * 0x9E3779B97F4A7C15ULL))) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound), by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t r = 0;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller, one variate per call.
    double normal(double mean, double stddev) {
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace mlgcp
