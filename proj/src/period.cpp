#include "fkpp/period.hpp"

#include <cmath>
#include <numbers>

#include "fkpp/error.hpp"
#include "fkpp/quadrature.hpp"

namespace fkpp {

namespace {

// Below this distance from the center (1, 0) both endpoints of the arc have
// collided and the harmonic closed form is used.
constexpr double kCenterRadius = 1e-6;

void check_T_domain(PhasePoint pt) {
  if (!(pt.p > 0.0 && pt.p < 1.0) || !(pt.q <= 0.0) || !std::isfinite(pt.q)) {
    throw Error(ErrorCode::InvalidDomain, "period_T needs p in (0,1), q <= 0");
  }
}

void check_T0_domain(PhasePoint pt) {
  if (!(pt.p > 0.0 && pt.p <= 1.0) || !(pt.q <= 0.0) || !std::isfinite(pt.q)) {
    throw Error(ErrorCode::InvalidDomain, "period_T0 needs p in (0,1], q <= 0");
  }
}

double harmonic_angle(PhasePoint pt) {
  const double b = 1.0 - pt.p;
  return std::atan2(b, -pt.q);  // arcsin(b / sqrt(b^2 + q^2)) for q <= 0
}

bool near_center(PhasePoint pt) { return std::hypot(1.0 - pt.p, pt.q) < kCenterRadius; }

// Integrand of T after u = p + (1 - p) s^2, times weight(u).
template <class Weight>
PeriodValue stem_integral(PhasePoint pt, double abs_tol, double rel_tol, Weight weight) {
  const double p = pt.p;
  const double q2 = pt.q * pt.q;
  const double b = 1.0 - p;
  auto f = [&](double s) {
    const double s2 = s * s;
    const double u = p + b * s2;
    const double g = potential_quotient(u, p);
    if (q2 == 0.0) return 2.0 * std::sqrt(b) / std::sqrt(g) * weight(u);
    return 2.0 * b * s / std::sqrt(q2 + b * s2 * g) * weight(u);
  };
  const auto r = integrate(f, 0.0, 1.0, {abs_tol, rel_tol, 4000});
  return {r.value, r.error};
}

// Integrand of T0 after u = p0 + (p - p0) s^2; the turning-point square root
// cancels analytically.
template <class Weight>
PeriodValue loop_integral(double p, double p0, double abs_tol, double rel_tol, Weight weight) {
  const double gap = p - p0;
  const double root = std::sqrt(gap);
  auto f = [&](double s) {
    const double u = p0 + gap * s * s;
    return 2.0 * root / std::sqrt(potential_quotient(u, p0)) * weight(u);
  };
  const auto r = integrate(f, 0.0, 1.0, {abs_tol, rel_tol, 4000});
  return {r.value, r.error};
}

double one(double) { return 1.0; }

double moment_weight(double u) {
  // (1 - u^2) / (3 u^2), with 1 - u^2 factored for u near 1.
  return (1.0 - u) * (1.0 + u) / (3.0 * u * u);
}

void check_turning(double p, double p0) {
  if (!(p0 > 0.0 && p0 <= p && p <= 1.0)) {
    throw Error(ErrorCode::InvalidDomain, "turning-point chart needs 0 < p0 <= p <= 1");
  }
}

}  // namespace

PeriodValue period_T(PhasePoint pt, double tol) {
  check_T_domain(pt);
  if (near_center(pt)) return {harmonic_angle(pt), kCenterRadius};
  return stem_integral(pt, tol, 0.0, one);
}

PeriodValue period_T0_turning(double p, double p0, double tol) {
  check_turning(p, p0);
  if (p0 == p) return {0.0, 0.0};
  return loop_integral(p, p0, tol, 0.0, one);
}

PeriodValue period_T0(PhasePoint pt, double tol) {
  check_T0_domain(pt);
  if (pt.q == 0.0) return {0.0, 0.0};
  const double p0 = turning_point_p0(pt);
  if (near_center(pt)) return {0.5 * std::numbers::pi - harmonic_angle(pt), kCenterRadius};
  return period_T0_turning(pt.p, p0, tol);
}

double moment_I1(PhasePoint pt, double tol) {
  check_T_domain(pt);
  return stem_integral(pt, 0.0, tol, moment_weight).value;
}

double moment_I2_turning(double p, double p0, double tol) {
  check_turning(p, p0);
  if (p0 == p) return 0.0;
  return loop_integral(p, p0, 0.0, tol, moment_weight).value;
}

PeriodGradient grad_T(PhasePoint pt, double tol) {
  check_T_domain(pt);
  if (!(pt.q < 0.0)) throw Error(ErrorCode::InvalidDomain, "grad_T needs q < 0");
  const double p = pt.p;
  const double q = pt.q;
  const double c = center_gap(pt);
  const double i1 = moment_I1(pt, tol);
  const double hat = (1.0 - p) * (1.0 + 2.0 * p) / (3.0 * p);
  return {(-p * (1.0 - p) * i1 + q) / c, (q * i1 + hat) / c};
}

PeriodGradient grad_T0(PhasePoint pt, double tol) {
  check_T0_domain(pt);
  if (!(pt.q < 0.0)) throw Error(ErrorCode::InvalidDomain, "grad_T0 needs q < 0");
  const double p = pt.p;
  const double q = pt.q;
  const double p0 = turning_point_p0(pt);
  const double c = center_gap(pt);
  const double i2 = moment_I2_turning(p, p0, tol);
  const double hat = (1.0 - p) * (1.0 + 2.0 * p) / (3.0 * p);
  return {(-p * (1.0 - p) * i2 - q) / c, (q * i2 - hat) / c};
}

PeriodGradient grad_T0_turning(double p, double p0, double tol) {
  check_turning(p, p0);
  if (!(p0 < p)) throw Error(ErrorCode::InvalidDomain, "grad_T0_turning needs p0 < p");
  const double q = orbit_slope(p, p0);
  const double c = center_gap({p, q});
  const double i2 = moment_I2_turning(p, p0, tol);
  const double hat = (1.0 - p) * (1.0 + 2.0 * p) / (3.0 * p);
  const double dT0_dq = (q * i2 - hat) / c;
  // q = -sqrt(A(p) - A(p0)) so dq/dp0 = -A'(p0) / (2 q).
  return {-1.0 / q, dT0_dq * (-potential_slope(p0) / (2.0 * q))};
}

double asymptotic_T(PhasePoint pt) {
  return -std::log((pt.p - pt.q) / 12.0) - kHomoclinicShift;
}

std::pair<double, double> center_limits(double Q) {
  if (!(Q < 0.0)) throw Error(ErrorCode::InvalidDomain, "center_limits needs Q < 0");
  const double t = std::asin(1.0 / std::sqrt(1.0 + Q * Q));
  return {t, 0.5 * std::numbers::pi - t};
}

}  // namespace fkpp
