#pragma once

#include <cstdint>
#include <random>

namespace canproj {

/// Deterministic seeded RNG. mt19937_64 is bit-stable across platforms,
/// so every seeded pipeline is reproducible byte-for-byte.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, n). n > 0.
    std::uint64_t below(std::uint64_t n) {
        // rejection sampling keeps the distribution exact and deterministic
        std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        std::uint64_t v;
        do { v = eng_(); } while (v >= limit);
        return v % n;
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::mt19937_64 eng_;
};

} // namespace canproj
