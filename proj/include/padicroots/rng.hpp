#pragma once

// SplitMix64 with per-sample substreams derived from (seed, stream, index),
// so a sample's draws depend only on its global index and parallel runs
// reproduce serial ones bit for bit.

#include "padicroots/numbers.hpp"

#include <cstdint>
#include <vector>

namespace padicroots {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : s_(state) {}

    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t mix(std::uint64_t x) {
        SplitMix64 g(x);
        return g.next();
    }

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
        return SplitMix64(mix(seed) ^ mix(mix(stream) + index));
    }

    // Uniform value in [0, bound) from 64 surplus bits beyond the bound's
    // width; the residual bias is ~2^-64, far below Monte Carlo noise.
    BigInt uniform_below(const BigInt& bound) {
        std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2) + 64;
        std::size_t words = (bits + 63) / 64;
        std::vector<std::uint64_t> buf(words);
        for (auto& w : buf) w = next();
        BigInt raw;
        mpz_import(raw.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
        return raw % bound;
    }

private:
    std::uint64_t s_;
};

}  // namespace padicroots
