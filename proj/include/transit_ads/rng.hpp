#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace transit_ads {

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the distributions below are written out
/// by hand because the std:: distributions differ between library vendors.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Independent substream keyed by (seed, stream_id).
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        return Rng(splitmix64(seed) ^ splitmix64(stream_id + 0x9e3779b97f4a7c15ULL));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Uniform in [lo, hi], inclusive.
    std::int64_t between(std::int64_t lo, std::int64_t hi);

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Index drawn proportionally to non-negative weights; uniform when all are zero.
    std::size_t weighted(std::span<const double> weights);

private:
    std::mt19937_64 engine_;
};

}  // namespace transit_ads
