#pragma once

// Reference computations for the tests. Each uses a different numerical
// route than the library: tanh-sinh quadrature on the raw singular
// integrands, TOMS 748 root finding, and odeint shooting.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace oracle {

inline double A(double u) { return u * u - 2.0 / 3.0 * u * u * u; }
inline double E(double p, double q) { return q * q - A(p); }

/// Root of A(x) = a on (0, 1) by TOMS 748.
inline double turning_point(double p, double q) {
  const double target = -E(p, q);
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(
      [&](double x) { return A(x) - target; }, 0.0, 1.0,
      boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

// (A(u) - A(w)) / (u - w), exact polynomial quotient.
inline double quotient(double u, double w) { return (u + w) - 2.0 / 3.0 * (u * u + u * w + w * w); }

/// int_p^1 du / sqrt(E + A(u)), raw integrand. The two-argument form of
/// tanh-sinh hands over the distance to the nearest endpoint, which keeps
/// the inverse-square-root singularity at u = p (q = 0) resolved.
inline double T(double p, double q) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double mid = 0.5 * (p + 1.0);
  return ts.integrate([&](double u, double xc) {
    if (q == 0.0) {
      const double d = u < mid ? -xc : u - p;
      return 1.0 / std::sqrt(d * quotient(u, p));
    }
    return 1.0 / std::sqrt(q * q + (u - p) * quotient(u, p));
  }, p, 1.0);
}

/// int_{p0}^p du / sqrt(E + A(u)), raw integrand, p0 from TOMS 748.
inline double T0(double p, double q) {
  const double p0 = turning_point(p, q);
  const double mid = 0.5 * (p0 + p);
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double u, double xc) {
    const double d = u < mid ? -xc : u - p0;
    return 1.0 / std::sqrt(d * quotient(u, p0));
  }, p0, p);
}

using State = std::vector<double>;

/// Fixed-step RK4 flow of w'' = w - w^2 (w = u~) from (w0, v0) until w reaches
/// `target` (w increasing); returns the arclength x at the crossing, refined
/// by secant on the last step.
inline double shoot_to(double w0, double v0, double target, double h = 1e-4) {
  namespace ode = boost::numeric::odeint;
  ode::runge_kutta4<State> rk;
  auto rhs = [](const State& y, State& dy, double) {
    dy[0] = y[1];
    dy[1] = y[0] - y[0] * y[0];
  };
  State y{w0, v0};
  double x = 0.0;
  for (;;) {
    State next = y;
    rk.do_step(rhs, next, x, h);
    if (next[0] >= target) {
      double lo = 0.0, hi = h;
      for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        State t = y;
        rk.do_step(rhs, t, x, mid);
        (t[0] < target ? lo : hi) = mid;
      }
      return x + 0.5 * (lo + hi);
    }
    y = next;
    x += h;
  }
}

/// u'' + u - u^2 = 0, u(0) = 0, u'(L) = 0, u > 0: shooting on u'(0) with
/// Dormand-Prince and bisection on the sign of u'(L). Returns u(L).
inline double interval_top(double L) {
  namespace ode = boost::numeric::odeint;
  auto end_state = [&](double s) {
    State y{0.0, s};
    auto rhs = [](const State& z, State& dz, double) {
      dz[0] = z[1];
      dz[1] = -z[0] + z[0] * z[0];
    };
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-13, 1e-13),
                            rhs, y, 0.0, L, 1e-3);
    return y;
  };
  // Slopes below the separatrix value 1/sqrt(3) stay in (0, 1); u'(L) > 0
  // means the bump has not yet turned.
  double lo = 1e-12, hi = 1.0 / std::sqrt(3.0) * (1.0 - 1e-15);
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (end_state(mid)[1] > 0.0 ? hi : lo) = mid;
  }
  return end_state(0.5 * (lo + hi))[0];
}

/// Lowest root of 2 sum tan(s L_j) = cot(s L) by TOMS 748, squared.
inline double flower_lambda0(double L, const std::vector<double>& loops) {
  double top = std::numbers::pi / (2.0 * L);
  for (double l : loops) top = std::min(top, std::numbers::pi / (2.0 * l));
  auto f = [&](double s) {
    double lhs = 0.0;
    for (double l : loops) lhs += 2.0 * std::tan(s * l);
    return lhs * std::sin(s * L) - std::cos(s * L);
  };
  std::uintmax_t iters = 300;
  auto r = boost::math::tools::toms748_solve(f, 1e-14, top * (1.0 - 1e-14),
                                             boost::math::tools::eps_tolerance<double>(52), iters);
  const double s = 0.5 * (r.first + r.second);
  return s * s;
}

}  // namespace oracle
