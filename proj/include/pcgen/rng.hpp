#pragma once

#include "pcgen/bitstring.hpp"

#include <cstdint>

namespace pcgen {

// splitmix64: deterministic across platforms, used everywhere a seed must
// reproduce byte-identical output.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound), bound > 0, via rejection.
    uint64_t below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold)
                return r % bound;
        }
    }

    BitString bits(size_t len) {
        BitString out(len);
        uint64_t word = 0;
        int have = 0;
        for (size_t i = 0; i < len; ++i) {
            if (have == 0) {
                word = next();
                have = 64;
            }
            out.set(i, static_cast<uint8_t>(word & 1));
            word >>= 1;
            --have;
        }
        return out;
    }
};

} // namespace pcgen
