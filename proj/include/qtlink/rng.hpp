#pragma once

#include <cmath>
#include <cstdint>

namespace qtlink {

// Deterministic per-trial random substreams.
//
// Each substream is a SplitMix64 sequence whose initial state is the
// SplitMix64 finalizer applied to (seed, stream). The stream id acts as a
// counter: substream(seed, i) depends only on the pair (seed, i), never on
// how many draws other substreams consumed. Trials keyed by their index can
// therefore run in any order, or in parallel, and reproduce bit-identical
// results. Output uses only uint64 arithmetic and an exact 53-bit double
// conversion, so sequences are identical across platforms.
class Substream {
public:
    Substream(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed + 0x9e3779b97f4a7c15ull * (stream + 1))) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        return mix(z);
    }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; consumes two uniforms.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace qtlink
