#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace fkpp {

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Root of a monotone f on [lo, hi] by Newton steps confined to the
/// shrinking bracket, falling back to bisection when a step leaves it or the
/// derivative is unusable. `fdf` returns {f(x), f'(x)}. Stops when
/// |f| <= ftol or the bracket collapses to rounding.
template <class FDF>
RootResult bracketed_newton(FDF fdf, double lo, double hi, bool increasing, double ftol,
                            int max_iter = 200) {
  double x = 0.5 * (lo + hi);
  RootResult r;
  for (int it = 0; it < max_iter; ++it) {
    auto [f, df] = fdf(x);
    r = {x, f, it + 1};
    if (std::abs(f) <= ftol) return r;
    if ((f < 0.0) == increasing) lo = x; else hi = x;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max({std::abs(lo), std::abs(hi), 1e-300})) {
      return r;
    }
    double next = x - f / df;
    if (!std::isfinite(next) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return r;
}

}  // namespace fkpp
