#pragma once

#include <cmath>

namespace decoh {

// sin(x)/x, series below |x| < 1e-4
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double sqrt_pi = 1.77245385090551602729816748334114518;

}  // namespace decoh
