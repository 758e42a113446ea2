#pragma once

#include <cstdint>

namespace coam {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stateless substream generator: value(stream, idx) depends only on
/// (seed, stream, idx), so any sample can be recomputed independently and
/// parallel consumers never contend.
struct Rng {
    std::uint64_t seed = 0;

    std::uint64_t raw(std::uint64_t stream, std::uint64_t idx) const {
        std::uint64_t z = splitmix64(seed ^ (0xd1342543de82ef95ULL * (stream + 1)));
        return splitmix64(z ^ (0xaf251af3b0f025b5ULL * (idx + 1)));
    }

    /// Uniform double in [0,1).
    double uniform(std::uint64_t stream, std::uint64_t idx) const {
        return (double)(raw(stream, idx) >> 11) * 0x1.0p-53;
    }
};

/// Sequential variant when per-index addressing is not needed.
struct SplitMix64 {
    std::uint64_t state = 0;
    explicit SplitMix64(std::uint64_t s) : state(s) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }
    double uniform() { return (double)(next() >> 11) * 0x1.0p-53; }
};

}  // namespace coam
