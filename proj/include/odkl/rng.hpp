#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace odkl {

// Deterministic RNG used everywhere. std::mt19937_64 raw output is fixed by
// the standard; the value transforms below are written out explicitly instead
// of going through std distributions, whose results are implementation
// defined. Same seed, same sequence, on every run.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

    // Independent substream derived from (seed, stream_id).
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        return Rng(mix(seed ^ (0x9E3779B97F4A7C15ull * (stream_id + 1))));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller, caching the paired draw.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

  private:
    static std::uint64_t mix(std::uint64_t x) {
        // SplitMix64 finalizer; spreads small/sequential seeds.
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace odkl
