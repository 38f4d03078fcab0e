#pragma once

#include <cmath>
#include <random>

namespace evifuse::detail {

// Uniform double in [0,1) from the top 53 bits of one engine draw; pinned
// here (rather than via <random> distributions) so identical seeds give
// identical bytes on every standard library.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller pair of independent standard normals.
inline void normal_pair(std::mt19937_64& rng, double& z0, double& z1) {
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    z0 = r * std::cos(two_pi * u2);
    z1 = r * std::sin(two_pi * u2);
}

// One standard normal draw (burns the pair's second half).
inline double normal01(std::mt19937_64& rng) {
    double z0 = 0.0, z1 = 0.0;
    normal_pair(rng, z0, z1);
    return z0;
}

}  // namespace evifuse::detail
