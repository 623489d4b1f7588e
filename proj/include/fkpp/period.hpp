#pragma once

#include <utility>

#include "fkpp/phaseplane.hpp"

namespace fkpp {

inline constexpr double kDefaultPeriodTol = 1e-10;

struct PeriodValue {
  double value = 0.0;
  double estimated_quadrature_error = 0.0;
};

struct PeriodGradient {
  double dp = 0.0;
  double dq = 0.0;
};

/// Arclength T(p, q) from (1, q~) down to (p, q) along the level set of E.
/// Requires p in (0, 1), q <= 0; q = 0 is the Dirichlet-Neumann interval case.
PeriodValue period_T(PhasePoint pt, double tol = kDefaultPeriodTol);

/// Arclength T0(p, q) from the turning point (p0, 0) to (p, q). Requires the
/// orbit to be closed, E(p, q) in (-1/3, 0); p = 1 is admitted.
PeriodValue period_T0(PhasePoint pt, double tol = kDefaultPeriodTol);

/// T0 parameterized by its turning point, 0 < p0 <= p <= 1. This form keeps
/// full precision for orbits hugging the homoclinic loop, where E(p, q)
/// cancels catastrophically.
PeriodValue period_T0_turning(double p, double p0, double tol = kDefaultPeriodTol);

/// Weakly singular moments (1 - u^2) / (3 u^2 v) over the T and T0 arcs.
double moment_I1(PhasePoint pt, double tol = kDefaultPeriodTol);
double moment_I2_turning(double p, double p0, double tol = kDefaultPeriodTol);

/// Analytic partial derivatives of T in (p, q); needs q < 0 strictly.
PeriodGradient grad_T(PhasePoint pt, double tol = kDefaultPeriodTol);

/// Analytic partial derivatives of T0 in (p, q); needs q < 0 strictly.
PeriodGradient grad_T0(PhasePoint pt, double tol = kDefaultPeriodTol);

/// Partial derivatives of T0 in the turning-point chart (p, p0):
/// dp holds dT0/dp at fixed p0 (= 1/|q|), dq holds dT0/dp0 at fixed p.
PeriodGradient grad_T0_turning(double p, double p0, double tol = kDefaultPeriodTol);

/// Leading large-period law  -ln((p - q) / 12) - x0.
double asymptotic_T(PhasePoint pt);

/// Limits of (T, T0) along q = Q (1 - p), p -> 1-. Requires Q < 0.
std::pair<double, double> center_limits(double Q);

}  // namespace fkpp
