#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "loscover/geometry.hpp"

namespace loscover {

/// Seeded random source with a portable draw sequence. Built on mt19937_64
/// (whose output stream is fixed by the standard) with doubles derived from
/// the top 53 bits, so the same seed yields the same values on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53-bit resolution. One engine draw.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform integer in [lo, hi], inclusive. One engine draw.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1;
        std::uint64_t v = lo + static_cast<std::uint64_t>(uniform() * static_cast<double>(span));
        return v > hi ? hi : v;
    }

    /// Uniform direction on the unit sphere. Two draws: cos(polar), azimuth.
    Vec3 unit_sphere() {
        const double z = uniform(-1.0, 1.0);
        const double az = uniform(0.0, 2.0 * kPi);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(az), s * std::sin(az), z};
    }

    /// Uniform direction on the upper unit hemisphere (z >= 0). Two draws.
    Vec3 unit_hemisphere_up() {
        const double z = uniform(0.0, 1.0);
        const double az = uniform(0.0, 2.0 * kPi);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(az), s * std::sin(az), z};
    }

    /// Uniform point in the ball of the given radius. Three draws:
    /// cos(polar), azimuth, cube root of the radial fraction.
    Vec3 in_ball(double radius) {
        const Vec3 dir = unit_sphere();
        const double r = radius * std::cbrt(uniform());
        return dir * r;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace loscover
