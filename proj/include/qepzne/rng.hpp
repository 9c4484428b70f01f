#pragma once

#include <cstdint>

namespace qepzne {

// Counter-based stream: the state is a pure function of (seed, stream),
// so per-shot streams are reproducible regardless of execution order.
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t stream) {
        state_ = mix(mix(seed) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 1));
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // uniform in [0, 1)
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    uint64_t next_below(uint64_t n) {
        // 64-bit multiply-shift; bias is negligible for the small n used here
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double p) { return next_double() < p; }

  private:
    static uint64_t mix(uint64_t z) {  // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    uint64_t state_;
};

}  // namespace qepzne
