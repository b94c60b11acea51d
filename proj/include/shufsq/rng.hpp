#pragma once
// Counter-based splittable RNG.
//
// Every Monte Carlo trial draws from its own stream, derived from
// (seed, stream_index) by two rounds of splitmix64 finalization.  Results are
// therefore reproducible for a given seed regardless of scheduling order.

#include <cstdint>
#include <cmath>

namespace shufsq {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream)
        : state_(splitmix64(splitmix64(seed) ^ splitmix64(~stream))) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    // one fair coin flip, buffered 64 at a time
    int bit() {
        if (nbits_ == 0) { buf_ = next_u64(); nbits_ = 64; }
        int b = int(buf_ & 1u);
        buf_ >>= 1;
        --nbits_;
        return b;
    }

    // uniform in [0, n) by rejection
    uint64_t below(uint64_t n) {
        uint64_t lim = ~uint64_t(0) - ~uint64_t(0) % n;
        uint64_t x;
        do { x = next_u64(); } while (x >= lim);
        return x % n;
    }

    double uniform01() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    // failures before the first success of a fair coin: NB(1) = geometric(1/2) on {0,1,...}
    long geometric_half() {
        long z = 0;
        while (bit() == 0) ++z;
        return z;
    }

private:
    uint64_t state_;
    uint64_t buf_ = 0;
    int nbits_ = 0;
};

} // namespace shufsq
