#pragma once

#include <cmath>

namespace billiards::detail {

/// Bisection on [lo, hi] given that f(lo) has sign `lo_sign` and f(hi) the
/// opposite sign. Runs until the midpoint no longer separates the endpoints.
template <class F>
double bisect(F&& f, double lo, double hi, bool lo_negative) {
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if (v == 0.0) return mid;
    if ((v < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace billiards::detail
