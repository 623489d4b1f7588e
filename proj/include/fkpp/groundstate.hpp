#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fkpp/graph.hpp"
#include "fkpp/phaseplane.hpp"

namespace fkpp {

/// Samples of one edge of to_graph(spec), in that edge's own coordinate
/// (stem: 0 at the Dirichlet vertex; loop j: t in [0, 2 L_j] with the loop
/// midpoint at t = L_j).
struct EdgeProfile {
  std::string edge_id;
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> du;  // du/dx
};

struct GroundStateResiduals {
  double period = 0.0;          // max of |T - L|, |T0 - L_j| at the solution
  double kirchhoff_flux = 0.0;  // |u~'(L) + sum_j (u~_j'(L_j) - u~_j'(-L_j))|
  double continuity = 0.0;      // max end-state mismatch |u~(L) - p|, |u~_j(+-L_j) - p|
  double dirichlet = 0.0;       // |u(0)|
};

struct GroundStateSolution {
  FlowerSpec spec;
  double p = 0.0;
  std::vector<double> q_loops;
  double q_stem = 0.0;  // 2 sum q_j
  std::vector<double> turning_points;  // p0 of each loop orbit
  std::vector<EdgeProfile> profiles;
  int newton_iterations = 0;
  GroundStateResiduals residuals;
  std::string initialization;  // "asymptotic", "continuation", "bisection" or "given"
};

struct GroundStateOptions {
  double tol = 1e-11;        // on max |F| of the period system
  double quad_tol = 1e-13;   // per period evaluation
  int max_iterations = 60;
  double profile_dx = 1e-3;  // 0 skips profile reconstruction
};

/// Dirichlet-Neumann interval [0, L]: the unique p with T(p, 0) = L.
/// Throws Error(BelowThreshold) for L <= pi/2.
GroundStateSolution solve_interval(double L, const GroundStateOptions& options = {});

/// Flower ground state by damped Newton on the period system
///   T(p, 2 sum q_j) = L,  T0(p, q_j) = L_j.
/// Throws Error(OutsideRegion) when lambda0 >= 1 and Error(NewtonStalled) if
/// every initialization strategy fails. N = 0 routes to solve_interval.
GroundStateSolution solve_flower(const FlowerSpec& spec, const GroundStateOptions& options = {});

/// Newton from a caller-supplied admissible point (p, q_j), E(p, q_j) < 0.
GroundStateSolution solve_flower_from(const FlowerSpec& spec, double p,
                                      const std::vector<double>& q_loops,
                                      const GroundStateOptions& options = {});

struct JacobianReport {
  Eigen::MatrixXd matrix;  // rows (T, T0_1..T0_N), columns (p, q_1..q_N)
  double determinant = 0.0;            // LU of `matrix`
  double expanded_determinant = 0.0;   // T_p prod a_j - 2 T_q sum_j b_j prod_{k!=j} a_k
  int expected_sign = 1;               // (-1)^(N+1)
};

/// Jacobian of (p, q_1..q_N) -> (L, L_1..L_N) from the analytic gradients.
JacobianReport jacobian_report(double p, const std::vector<double>& q_loops,
                               double tol = 1e-12);

/// RK4 integration of u~'' = u~ - u~^2 with step <= dx: stem from (1, q~) at
/// the Dirichlet end, each loop outward from its midpoint turning point
/// (p0, 0). Fills solution.profiles and the kirchhoff/continuity/dirichlet
/// residuals. Throws Error(StepTooLarge) if an end-state mismatch exceeds
/// 10 * tol.
void reconstruct_profile(GroundStateSolution& solution, double dx, double tol);

/// max |u - 1| over loop samples (the stem pendant is excluded). For the
/// interval (no loops) it is |u - 1| at the Neumann end.
double proximity_check(const GroundStateSolution& solution);

/// H(u) = int 1/2 (u'^2 - u^2) + u^3 / 3 by the trapezoid rule per edge.
double energy_of(const GroundStateSolution& solution);

/// Hermite interpolation of the profile of `edge_id` at x.
double profile_value(const GroundStateSolution& solution, const std::string& edge_id, double x);

}  // namespace fkpp
