#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ppcf {

// splitmix64; used to derive independent child streams from (seed, tags...).
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) noexcept {
    std::uint64_t s = mix64(seed);
    s = mix64(s ^ mix64(a + 0x632be59bd9b4e019ULL));
    s = mix64(s ^ mix64(b + 0x9e6c63d0876a9a47ULL));
    s = mix64(s ^ mix64(c + 0xc2b2ae3d27d4eb4fULL));
    return s;
}

// mt19937_64 with hand-rolled distributions so that sequences are identical
// across standard libraries (std::uniform_real_distribution is not portable).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [lo, hi] (small ranges; modulo bias negligible and
    // irrelevant for sampling purposes, but keep it exact anyway)
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return lo + static_cast<std::int64_t>(v % span);
    }

    double exponential(double mean) {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return -mean * std::log(u);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace ppcf
