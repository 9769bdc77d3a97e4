#pragma once

#include <cstdint>

namespace polybound {

// Counter-based random stream (splitmix64 core). The state for a given
// (seed, stream) pair is a pure function of both values, so draw i of a
// Monte Carlo run can be produced by any worker: results are invariant
// under the worker count.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) : state_(init(seed, stream)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    static std::uint64_t init(std::uint64_t seed, std::uint64_t stream) {
        return mix(seed + 0x9E3779B97F4A7C15ull * (stream + 1)) ^ mix(stream ^ 0xD1B54A32D192ED03ull);
    }

    std::uint64_t state_;
};

// Inclusive-range helpers for deterministic test-instance generation.
inline int uniform_int(RngStream& rng, int lo, int hi) {
    return lo + static_cast<int>(rng.next_unit() * (hi - lo + 1));
}

inline double uniform_real(RngStream& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.next_unit();
}

}  // namespace polybound
