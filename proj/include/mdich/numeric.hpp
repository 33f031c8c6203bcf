#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace mdich {

/// Relative slack used by every floating inequality check.
inline constexpr double kRelSlack = 1e-9;

/// a <= b up to relative slack.
inline bool leq(double a, double b)
{
    return a <= b + kRelSlack * std::max(std::abs(a), std::abs(b));
}

inline bool geq(double a, double b) { return leq(b, a); }

inline bool approx_equal(double a, double b)
{
    return std::abs(a - b) <= kRelSlack * std::max(std::abs(a), std::abs(b));
}

/// Ceiling that ignores rounding noise just above an integer.
inline std::int64_t ceil_tol(double x)
{
    return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

/// Floor that ignores rounding noise just below an integer.
inline std::int64_t floor_tol(double x)
{
    return static_cast<std::int64_t>(std::floor(x + 1e-9));
}

inline double log_base(double x, double base) { return std::log(x) / std::log(base); }

}  // namespace mdich
