#pragma once

#include <cstdint>
#include <random>

namespace nash {

/// Seeded deterministic random source. Draw helpers avoid
/// std::uniform_int_distribution so that streams are reproducible
/// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform-ish integer in [0, n); n must be positive. Modulo bias is
    /// irrelevant for the tiny ranges used here.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    /// Integer in the closed range [lo, hi].
    long int_in(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Derives an independent child seed; used to give each pipeline stage
    /// its own stream.
    std::uint64_t fork() { return next() ^ 0x9e3779b97f4a7c15ULL; }

private:
    std::mt19937_64 gen_;
};

}  // namespace nash
