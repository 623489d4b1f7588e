#include "fkpp/phaseplane.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "fkpp/error.hpp"

namespace fkpp {

double potential_quotient(double u, double w) {
  if (u + w > 1.0) {
    const double a = 1.0 - u;
    const double b = 1.0 - w;
    return (a + b) - 2.0 / 3.0 * (a * a + a * b + b * b);
  }
  return (u + w) - 2.0 / 3.0 * (u * u + u * w + w * w);
}

EnergyLevel energy(double u, double v) { return {v * v - u * u + 2.0 / 3.0 * u * u * u}; }

double center_gap(PhasePoint pt) {
  const double b = 1.0 - pt.p;
  return pt.q * pt.q + b * b * (1.0 - 2.0 / 3.0 * b);
}

double q_tilde(PhasePoint pt) { return -std::sqrt(center_gap(pt)); }

namespace {

// Root of the increasing map x -> f(x) on (0, 1) by Newton steps kept inside
// a shrinking bracket; runs to machine precision.
template <class F, class DF>
double monotone_root(F f, DF df, double target, double guess) {
  double lo = 0.0;
  double hi = 1.0;
  double x = std::clamp(guess, 0.0, 1.0);
  if (x <= lo || x >= hi) x = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double r = f(x) - target;
    if (r == 0.0) return x;
    (r > 0.0 ? hi : lo) = x;
    double next = x - r / df(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
      return next;
    }
    x = next;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return x;
}

}  // namespace

double turning_point_p0(PhasePoint pt) {
  const auto e = energy(pt);
  if (!(pt.p > 0.0 && pt.p <= 1.0) || pt.q > 0.0) {
    throw Error(ErrorCode::InvalidDomain, "phase point outside (0,1] x (-inf,0]");
  }
  if (!e.inside_homoclinic()) {
    throw Error(ErrorCode::OrbitNotClosed,
                "E(p,q) = " + std::to_string(e.value) + " not in (-1/3, 0)");
  }
  if (pt.q == 0.0) return pt.p;

  const double gap = center_gap(pt);
  if (gap < 1.0 / 6.0) {
    // p0 > 1/2: solve a^2 (1 - 2a/3) = q~^2 for a = 1 - p0.
    auto f = [](double a) { return a * a * (1.0 - 2.0 / 3.0 * a); };
    auto df = [](double a) { return 2.0 * a * (1.0 - a); };
    const double a = monotone_root(f, df, gap, std::sqrt(gap));
    return 1.0 - a;
  }
  // p0 <= 1/2: solve A(x) = A(p) - q^2.
  const double target = potential(pt.p) - pt.q * pt.q;
  return monotone_root(potential, potential_slope, target, std::sqrt(std::max(target, 0.0)));
}

double orbit_slope(double p, double p0) { return -std::sqrt(potential_gap(p, p0)); }

}  // namespace fkpp
