#pragma once

#include <cstdint>
#include <random>

namespace navsim {

/// Seeded random stream. Every scenario run owns exactly one.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double gaussian(double sigma)
    {
        if (sigma == 0.0)
            return 0.0;
        return std::normal_distribution<double>(0.0, sigma)(engine_);
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    /// Uniform integer on [0, n).
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace navsim
