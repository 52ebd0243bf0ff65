#pragma once

#include <algorithm>
#include <cmath>

namespace jetspace {

inline constexpr double kRelTol = 1e-10;
inline constexpr double kAbsTol = 1e-12;

// Relative comparison with an absolute floor for values near zero.
inline bool nearly_equal(double a, double b, double rel = kRelTol, double abs = kAbsTol)
{
    const double diff = std::abs(a - b);
    if (diff <= abs) return true;
    return diff <= rel * std::max(std::abs(a), std::abs(b));
}

inline double rel_error(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

}  // namespace jetspace
