#pragma once

#include <cstdint>
#include <random>

namespace gtsim {

/// Purpose tag for per-device substreams.
enum class StreamKind : std::uint64_t { Arrivals = 1, Backoff = 2, Channel = 3, Markers = 4, Cap = 5 };

/// Seeded random stream. Substreams are derived from (master seed, device,
/// purpose) by SplitMix64 mixing, so adding a device never perturbs the draws
/// of the others.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream derive(std::uint64_t master_seed, std::uint64_t device, StreamKind kind);

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();
    /// Uniform on (0, 1].
    double uniform_open_zero() { return 1.0 - uniform(); }
    bool bernoulli(double p) { return uniform() < p; }
    /// Uniform integer on [0, bound).
    std::uint64_t below(std::uint64_t bound);
    double normal(double mean, double stddev);

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace gtsim
