#pragma once

#include <functional>

namespace fkpp {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // Kronrod-Gauss difference summed over the final partition
  int evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-13;
  int max_intervals = 4000;
};

/// Globally adaptive 7-point Gauss / 15-point Kronrod quadrature on [a, b]:
/// the subinterval with the largest error estimate is bisected until the
/// summed estimate falls below max(abs_tol, rel_tol * |value|). The integrand
/// must be finite on the closed interval; weak endpoint singularities are the
/// caller's job to remove by substitution.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

}  // namespace fkpp
