// SPDX-License-Identifier: Apache-2.0

#ifndef PINCH_NUMERIC_HPP
#define PINCH_NUMERIC_HPP

#include <algorithm>
#include <cmath>

namespace pinch {

inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsFloor = 1e-15;

/// a <= b up to relative tolerance `rel` (with absolute floor).
inline bool leq_tol(double a, double b, double rel = kRelTol) noexcept
{
    return a <= b + std::max(rel * std::max(std::abs(a), std::abs(b)), kAbsFloor);
}

inline bool close_rel(double a, double b, double rel = kRelTol) noexcept
{
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), kAbsFloor);
}

inline double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) noexcept { return 10.0 * std::log10(w) + 30.0; }

} // namespace pinch

#endif // PINCH_NUMERIC_HPP
