#pragma once

#include <cmath>
#include <numbers>

namespace fkpp {

/// Point (u~, v~) = (p, q) of the stationary orbit u~'' - u~ + u~^2 = 0,
/// where u~ = 1 - u. Admissible quadrant: p in (0, 1], q <= 0.
struct PhasePoint {
  double p = 0.0;
  double q = 0.0;
};

/// Value of the first integral on an orbit. The center (1, 0) sits at -1/3,
/// the saddle and its homoclinic loop at 0.
struct EnergyLevel {
  double value = 0.0;

  bool inside_homoclinic() const { return value > -1.0 / 3.0 && value < 0.0; }
};

inline constexpr double kCenterEnergy = -1.0 / 3.0;

/// Shift of the homoclinic profile 3/2 sech^2((x + x0)/2) that puts
/// (1, -1/sqrt 3) at x = 0.
inline const double kHomoclinicShift = 2.0 * std::acosh(std::sqrt(1.5));

/// A(u) = u^2 - 2u^3/3, so that E(u, v) = v^2 - A(u).
inline double potential(double u) { return u * u - 2.0 / 3.0 * u * u * u; }
inline double potential_slope(double u) { return 2.0 * u * (1.0 - u); }

/// (A(u) - A(w)) / (u - w), evaluated in whichever of the expansions about 0
/// or about 1 avoids cancellation. Positive for u, w in [0, 1] not both 1.
double potential_quotient(double u, double w);

/// A(u) - A(w) without cancellation.
inline double potential_gap(double u, double w) { return (u - w) * potential_quotient(u, w); }

EnergyLevel energy(double u, double v);
inline EnergyLevel energy(PhasePoint pt) { return energy(pt.p, pt.q); }

/// E(p, q) + A(1) = q~^2: squared slope where the level set crosses u~ = 1.
double center_gap(PhasePoint pt);

/// Slope q~ <= 0 at u~ = 1 on the level set through pt.
double q_tilde(PhasePoint pt);

/// Turning point p0 in (0, 1) with A(p0) = -E(p, q), p0 <= p.
/// Throws Error(OrbitNotClosed) unless E(p, q) lies in (-1/3, 0).
double turning_point_p0(PhasePoint pt);

/// Slope at u~ = p on the closed orbit through (p0, 0): -sqrt(A(p) - A(p0)).
double orbit_slope(double p, double p0);

}  // namespace fkpp
