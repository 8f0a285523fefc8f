#pragma once

// Self-contained random number generation. std::* distributions are not
// stable across standard library implementations, so every sampler used by
// the generators lives here and is pinned by unit tests.

#include <cassert>
#include <cmath>
#include <cstdint>

namespace pag {

// SplitMix64 (Steele/Lea/Flood). Used to expand seeds and as a one-shot hash.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

// splitmix64 finalizer as a stateless 64-bit mixer.
inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// Derives the seed for replication r (or a labelled sub-stream) from a master
// seed. Each replication gets a seed independent of execution order, so
// parallel runs reduce to the same results as serial ones.
inline uint64_t mix_seed(uint64_t master, uint64_t stream) {
    return mix64(master + 0x9e3779b97f4a7c15ull * (stream + 0x632be59bd9b4e019ull));
}

// Sub-stream labels for the coupling pipeline.
inline constexpr uint64_t kStreamGen = 0x67656eull;     // graph generation
inline constexpr uint64_t kStreamSelect = 0x73656cull;  // index selection
inline constexpr uint64_t kStreamThin = 0x7468696eull;  // edge thinning

// xoshiro256++ 1.0 (Blackman & Vigna, public domain reference), seeded via
// SplitMix64 per the authors' recommendation.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
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

    // Uniform double in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // Uniform integer in [0, bound), unbiased via rejection on the top bits.
    uint64_t below(uint64_t bound) {
        assert(bound > 0);
        const uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            const uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Binomial(n, p) by CDF inversion from a single uniform. All call sites
    // have small n*p, where inversion is O(1 + n*p) expected.
    uint64_t binomial(uint64_t n, double p) {
        if (n == 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        const double q0 = std::exp(static_cast<double>(n) * std::log1p(-p));
        if (q0 <= 0.0) {
            // P(X=0) underflowed: fall back to explicit Bernoulli draws.
            uint64_t hits = 0;
            for (uint64_t j = 0; j < n; ++j) hits += bernoulli(p) ? 1 : 0;
            return hits;
        }
        const double u = next_double();
        const double odds = p / (1.0 - p);
        double pmf = q0;
        double cdf = q0;
        uint64_t k = 0;
        while (u >= cdf && k < n) {
            pmf *= odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
            cdf += pmf;
            ++k;
            // Guard against the tail where pmf underflows before cdf reaches u.
            if (pmf <= 0.0) break;
        }
        return k;
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
};

}  // namespace pag
