#pragma once

#include <cmath>
#include <limits>

namespace exptail {

// Extended-real convention used throughout: values live in (-inf, +inf],
// with IEEE +infinity as the "+inf" sentinel. Sums follow convex-analysis
// rules (+inf dominates); differences of two infinities are guarded at the
// call sites that can produce them.

inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_pos_inf(double v) { return std::isinf(v) && v > 0; }

// a - b with the convention finite - (+inf) = -inf, (+inf) - finite = +inf.
// (+inf) - (+inf) is treated as -inf: in every sup of the form (x,y) - f(x)
// an infinite f disqualifies the point.
inline double sub_guarded(double a, double b) {
    if (is_pos_inf(b)) return kNegInf;
    if (is_pos_inf(a)) return kPosInf;
    return a - b;
}

}  // namespace exptail
