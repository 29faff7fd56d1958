#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ringlens {

/// Deterministic Gaussian stream. Uniforms are built from raw mt19937_64
/// words so the sequence is pinned by the standard, independent of any
/// library's distribution implementation.
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }

    double operator()() {  // standard normal, Box-Muller pair cached
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ringlens
