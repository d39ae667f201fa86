#pragma once

#include <cstdint>
#include <random>

#include "vanbounds/errors.hpp"

namespace vanbounds {

/// Stateless 64-bit finalizer (splitmix64 step). Used to derive independent
/// per-trial seeds from a base seed and stream indices, so results are
/// reproducible bit-for-bit across platforms.
inline std::uint64_t scramble(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return scramble(scramble(seed ^ scramble(a)) ^ scramble(b ^ 0x5851F42D4C957F2DULL));
}

/// mt19937_64 with a fixed bits-to-double mapping. The standard distributions
/// are not bit-reproducible across library implementations; this one is.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) {
        if (!(lo <= hi)) throw invalid_input_error("uniform bounds out of order");
        return lo + (hi - lo) * uniform01();
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace vanbounds
