#pragma once

#include <cmath>
#include <cstdint>

namespace ratchetlab {

// SplitMix64 finalizer. Bijective on 64-bit words; used for seed derivation
// and for seeding the main generator.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream purposes. Each simulation owns independent streams so that e.g.
// the jump clock does not perturb the driving noise when parameters change.
enum class StreamPurpose : std::uint64_t {
    noise = 1,    // Gaussian increments of the driving diffusion
    jump = 2,     // exponential clock, jump heights, uniform resets
    bridge = 3,   // within-step boundary-hit decisions
    generic = 4,
};

// Derived seed for (root, replica index, purpose). Distinct triples map to
// distinct streams; mix64 is applied twice to decouple the inputs.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index,
                                 StreamPurpose purpose = StreamPurpose::generic) {
    std::uint64_t h = mix64(root ^ 0x517cc1b727220a95ULL);
    h = mix64(h + 0x2545f4914f6cdd1dULL * index);
    h = mix64(h + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(purpose));
    return h;
}

// xoshiro256++ with SplitMix64 state expansion.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) {
            sm += 0x9e3779b97f4a7c15ULL;
            w = mix64(sm);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1); safe argument for log.
    double uniform_pos() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform_pos()); }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u = uniform_pos();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace ratchetlab
