#pragma once

#include <cstdint>

namespace treels {

// Deterministic 64-bit generator (splitmix64). The constants below are the
// standard ones from Steele, Lea and Flood's original writeup; output is
// bit-identical on every platform, which the generators and the benchmark
// harness rely on for reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). Plain modulo; the bias is irrelevant at the
    // bounds used here and keeps the sequence easy to document.
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

    // Uniform integer in [lo, hi], inclusive.
    long long next_int(long long lo, long long hi) {
        return lo + static_cast<long long>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

}  // namespace treels
