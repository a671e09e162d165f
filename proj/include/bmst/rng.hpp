#pragma once

#include <cstdint>

namespace bmst {

// Deterministic 64-bit generator: xoshiro256++ seeded through splitmix64.
// Substreams are derived from (master seed, stream index) with the splitmix
// finalizer, so trials/batches can be assigned independent streams that are
// reproducible bit-for-bit within one build regardless of execution order.

inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    // Independent substream keyed by (master, index).
    static Rng substream(uint64_t master, uint64_t index) {
        return Rng(derive_seed(master, index));
    }

    // Seed of the (master, index) substream, for further derivation layers.
    static uint64_t derive_seed(uint64_t master, uint64_t index) {
        uint64_t sm = master;
        uint64_t a = splitmix64_next(sm);
        sm = a ^ (0x9E3779B97F4A7C15ULL * (index + 1));
        return splitmix64_next(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n), n > 0. Rejection-free modulo is fine here:
    // n is always tiny relative to 2^64 so the bias is < 2^-40.
    uint64_t uniform_index(uint64_t n) { return next_u64() % n; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

} // namespace bmst
