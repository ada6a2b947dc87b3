#include "vesselforge/random.hpp"

#include <limits>

namespace vesselforge {

namespace {

std::mt19937_64 seeded_engine(std::initializer_list<std::uint32_t> words) {
    std::seed_seq seq(words);
    return std::mt19937_64(seq);
}

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed)
    : engine_(seeded_engine({lo32(seed), hi32(seed)})) {}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t key)
    : engine_(seeded_engine({lo32(seed), hi32(seed), lo32(key), hi32(key), 0x76657373u})) {}

double RandomStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    if (lo == hi) return lo;
    double v = lo + (hi - lo) * uniform01();
    // Guard against rounding up to hi for tiny spans.
    return v < hi ? v : lo;
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max()) {
        return static_cast<std::int64_t>(engine_());
    }
    const std::uint64_t range = span + 1;
    // Largest multiple of range representable; values above it are rejected.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                (std::numeric_limits<std::uint64_t>::max() % range + 1) % range;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v > limit);
    return lo + static_cast<std::int64_t>(v % range);
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace vesselforge
