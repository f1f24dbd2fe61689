#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace docground {

// Thin wrapper around mt19937_64. The helpers below avoid std::uniform_*
// distributions on purpose: their output is not pinned down by the standard,
// and seeded runs must reproduce bit-for-bit across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, n). Modulo bias is irrelevant for the n we use.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    // Inclusive on both ends.
    int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

    // Uniform in [0, 1), 53-bit resolution.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double range(double lo, double hi) { return lo + unit() * (hi - lo); }

    bool chance(double p) { return unit() < p; }

  private:
    std::mt19937_64 eng_;
};

inline constexpr std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace docground
