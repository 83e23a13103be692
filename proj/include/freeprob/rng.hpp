#pragma once

#include <cmath>
#include <cstdint>

namespace freeprob {

/// SplitMix64: the declared 64-bit counter-based uniform generator. Every
/// simulation stream is one of these; per-trial streams are seeded as
/// master_seed XOR trial_index.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// 53-bit uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Standard normal deviates via Box-Muller over SplitMix64 uniforms (no
/// inverse CDF, so the stream is reproducible from the uniform contract).
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = gen_.uniform01();
        double u2 = gen_.uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    SplitMix64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace freeprob
