#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace uwsn {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Seeded random stream. Every purpose (deployment, GA, PSO, packets, ...) gets its own
/// stream derived from a root seed and a fixed label, so one module's draws never shift
/// another's.
///
/// Draws are built on mt19937_64 (whose output sequence is fixed by the standard) with
/// hand-rolled uniform/normal transforms, so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : _engine(splitmix64(seed)) {}

    static Rng stream(std::uint64_t root_seed, std::string_view label) {
        return Rng(splitmix64(root_seed) ^ fnv1a64(label));
    }

    std::uint64_t next_u64() { return _engine(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(_engine() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::size_t index(std::size_t n) {
        // rejection sampling keeps the draw unbiased for any n
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = _engine();
        } while (r >= limit);
        return static_cast<std::size_t>(r % n);
    }

    /// Box-Muller; the spare variate is cached.
    double normal(double mean = 0.0, double stddev = 1.0) {
        if (_has_spare) {
            _has_spare = false;
            return mean + stddev * _spare;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        _spare = r * std::sin(theta);
        _has_spare = true;
        return mean + stddev * r * std::cos(theta);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 _engine;
    double _spare = 0.0;
    bool _has_spare = false;
};

}  // namespace uwsn
