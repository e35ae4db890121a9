#pragma once

#include <cstdint>
#include <random>

namespace unisphere {

/// Identifies one reproducible random stream.
struct RngSeed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;
};

/// Mixes any number of 64-bit tags into one seed (splitmix64 finalizer chain).
/// Used to derive per-cell streams such as (master, family, tau index).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

/// 64-bit Mersenne Twister keyed by (master, stream) through std::seed_seq,
/// with draw procedures fixed here rather than left to the standard library
/// distributions, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(RngSeed seed);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    /// Standard normal, Marsaglia polar method.
    double normal();
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace unisphere
