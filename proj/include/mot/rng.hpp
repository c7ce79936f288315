#pragma once

#include <cstdint>
#include <random>

#include "mot/rational.hpp"

namespace mot {

// Thin wrapper over mt19937_64 with hand-rolled uniform mappings so streams
// are identical across standard libraries (std::uniform_real_distribution is
// implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] via rejection-free modulo (bias negligible
    // for the small ranges used here, but keep it exact anyway).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return lo + static_cast<std::int64_t>(v % span);
    }

    // Random rational p/q with |p| <= num_range and 1 <= q <= den_range.
    Rational rational(std::int64_t num_range, std::int64_t den_range) {
        const std::int64_t p = uniform_int(-num_range, num_range);
        const std::int64_t q = uniform_int(1, den_range);
        return Rational(p, q);
    }

    // Positive rational in (0, num_range].
    Rational positive_rational(std::int64_t num_range, std::int64_t den_range) {
        const std::int64_t p = uniform_int(1, num_range);
        const std::int64_t q = uniform_int(1, den_range);
        return Rational(p, q);
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace mot
