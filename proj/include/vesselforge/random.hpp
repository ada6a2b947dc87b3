#pragma once

#include <cstdint>
#include <random>

namespace vesselforge {

/// Deterministic random stream.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard. The
/// distribution mappings are implemented here rather than taken from <random>
/// because the standard distributions are implementation-defined, and every
/// draw must be identical across compilers and platforms.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    /// Stream keyed by (seed, key). Keys that differ in any bit yield
    /// unrelated streams; used to give every sample index its own stream.
    RandomStream(std::uint64_t seed, std::uint64_t key);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform in [lo, hi). Returns lo when lo == hi.
    double uniform(double lo, double hi);

    /// Uniform integer in [lo, hi], inclusive, unbiased (rejection sampling).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer. Used to derive child seeds (few-shot repetition seeds).
std::uint64_t mix64(std::uint64_t x);

}  // namespace vesselforge
