#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "fkpp/discretization.hpp"
#include "fkpp/groundstate.hpp"

namespace fkpp {

enum class Terminal { ConvergedTrivial, ConvergedNontrivial, MaxStepsReached };

std::string to_string(Terminal t);

struct EvolveOptions {
  double dt = 0.1;
  double max_t = 1e4;
  double tol = 1e-9;
  bool parallel = true;  // OpenMP kernels; false runs the serial reference
  double min_dt = 1e-8;  // halving floor before ComparisonViolated is raised
};

/// Running check 0 <= u <= ubar(t), with ubar the explicit-Euler logistic
/// supersolution started from max(1, max u0).
struct ComparisonReport {
  bool ok = true;
  double min_value = 0.0;   // smallest u seen
  double max_excess = 0.0;  // largest u - ubar seen (<= 0 when ok)
  int violations = 0;       // rejected steps
  double bound = 1.0;       // ubar at the final time
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> sup_norm;
  Terminal terminal = Terminal::MaxStepsReached;
  Field final_field;
  double dt = 0.0;           // step in use at the end
  double stationarity = 0.0; // last |u(t+dt) - u(t)|_inf / dt
  ComparisonReport comparison;
};

/// IMEX stepper: (M + dt K) u_new = M (u + dt u (1 - u)) on the free nodes,
/// Dirichlet nodes held at 0. The sparse LDLT factor is cached per dt.
class Evolver {
 public:
  explicit Evolver(std::shared_ptr<const Discretization> mesh, bool parallel = true);

  Field step(const Field& u, double dt);
  const Discretization& mesh() const { return *mesh_; }

 private:
  using Solver = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;
  const Solver& factor(double dt);

  std::shared_ptr<const Discretization> mesh_;
  bool parallel_;
  Eigen::SparseMatrix<double> k_free_;
  std::map<double, std::unique_ptr<Solver>> factors_;
  Eigen::VectorXd rhs_;
};

/// One step with a fresh Evolver.
Field step(const Field& u, double dt);

/// Steps until |du|_inf / dt <= tol * min(1, |u|_inf) and the geometric
/// tail of the remaining changes is below the same bound (stationary), or
/// |u|_inf <= 10 tol (trivial), or t > max_t. On a comparison violation the
/// step is retried with dt / 2. Throws Error(NegativeInitialData) if u0 has a
/// negative sample.
EvolutionTrace run_to_attractor(const Field& u0, const EvolveOptions& options = {});

/// Discrete H(u) = 1/2 u^T K u - 1/2 sum m u^2 + 1/3 sum m u^3.
double energy_trace(const Field& u);

/// Checks a field against the bound: fills min_value / max_excess and
/// returns whether 0 <= u <= bound holds to `slack`.
bool comparison_monitor(const Field& u, double bound, ComparisonReport& report,
                        double slack = 1e-12);

/// Logistic step of the supersolution: ubar + dt ubar (1 - ubar).
double logistic_bound_step(double ubar, double dt);

/// amplitude on every non-Dirichlet vertex, ramping linearly to 0 along
/// edges that end at a Dirichlet vertex.
Field hat_field(std::shared_ptr<const Discretization> mesh, double amplitude);

/// Piecewise-linear interpolation of per-edge samples (edge ids and x in the
/// mesh graph's edge coordinates). Edges without samples are left at 0.
Field field_from_samples(std::shared_ptr<const Discretization> mesh,
                         const std::vector<EdgeSample>& samples);

/// Ground-state profile interpolated onto a mesh of to_graph(solution.spec).
Field field_from_profile(std::shared_ptr<const Discretization> mesh,
                         const GroundStateSolution& solution);

}  // namespace fkpp
