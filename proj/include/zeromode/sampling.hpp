#pragma once

// Seeded low-discrepancy point sets. Sample positions are a pure function of
// the seed (Halton sequence with a seed-dependent start index), never of OS
// entropy, so reports are reproducible byte for byte.

#include <cstdint>
#include <vector>

#include "zeromode/algebra.hpp"

namespace zeromode {

/// Element `index` of the van der Corput sequence in the given base.
inline double halton(std::uint64_t index, std::uint32_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

/// n quasi-random points in the ball |x| <= radius. The seed advances the
/// Halton (2,3,5) start index by a fixed prime stride.
inline std::vector<Vec3> ball_points(int n, double radius, std::uint64_t seed = 0) {
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const std::uint64_t start = 1 + seed * 6151;
    for (int k = 0; k < n; ++k) {
        const std::uint64_t i = start + static_cast<std::uint64_t>(k);
        const double u1 = halton(i, 2), u2 = halton(i, 3), u3 = halton(i, 5);
        const double r = radius * std::cbrt(u1);
        const double z = 1.0 - 2.0 * u2;
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double ph = 2.0 * M_PI * u3;
        pts.push_back({r * s * std::cos(ph), r * s * std::sin(ph), r * z});
    }
    return pts;
}

/// n quasi-random unit directions.
inline std::vector<Vec3> sphere_points(int n, std::uint64_t seed = 0) {
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const std::uint64_t start = 1 + seed * 6151;
    for (int k = 0; k < n; ++k) {
        const std::uint64_t i = start + static_cast<std::uint64_t>(k);
        const double z = 1.0 - 2.0 * halton(i, 2);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double ph = 2.0 * M_PI * halton(i, 3);
        pts.push_back({s * std::cos(ph), s * std::sin(ph), z});
    }
    return pts;
}

}  // namespace zeromode
