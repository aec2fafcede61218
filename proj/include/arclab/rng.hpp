#pragma once

#include <cstdint>

namespace arclab {

/// Counter-based generator: every draw is a pure hash of
/// (seed, stream, counter), so sample i of stream s is the same value no
/// matter which thread computes it or in what order.
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t stream = 0, uint64_t counter = 0)
        : seed_(seed), stream_(stream), counter_(counter) {}

    static uint64_t hash(uint64_t seed, uint64_t stream, uint64_t counter) {
        uint64_t x = seed;
        x = mix(x ^ rotl(stream, 24) ^ 0x9e3779b97f4a7c15ULL);
        x = mix(x ^ rotl(counter, 40) ^ 0xbf58476d1ce4e5b9ULL);
        x = mix(x + stream + (counter << 1));
        return x;
    }

    uint64_t next_u64() { return hash(seed_, stream_, counter_++); }

    /// Uniform double in (0,1).
    double next_double() {
        uint64_t u = next_u64() >> 11;  // 53 bits
        double x = (static_cast<double>(u) + 0.5) * 0x1p-53;
        return x;
    }

    /// Uniform in (lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    uint64_t next_below(uint64_t n) { return next_u64() % n; }

  private:
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    uint64_t seed_, stream_, counter_;
};

}  // namespace arclab
