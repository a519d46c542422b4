#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace farmgate {

// Nearest whole currency unit, ties away from zero (4714.5 -> 4715).
inline double round_currency(double value) {
    return static_cast<double>(std::llround(value));
}

// Two-decimal reporting value, ties away from zero.
inline double round_2dp(double value) {
    return std::round(value * 100.0) / 100.0;
}

// Round to `digits` significant decimal digits; used at the JSON boundary.
inline double round_sig(double value, int digits) {
    if (value == 0.0 || !std::isfinite(value)) return value;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return std::strtod(buf, nullptr);
}

inline bool approx_eq(double a, double b, double tol) {
    return std::fabs(a - b) <= tol;
}

}  // namespace farmgate
