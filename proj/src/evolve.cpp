#include "fkpp/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "fkpp/error.hpp"
#include "fkpp/kernels.hpp"

namespace fkpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRoundoff = 1e-14;

std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::span<double> view(Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

std::string to_string(Terminal t) {
  switch (t) {
    case Terminal::ConvergedTrivial: return "ConvergedTrivial";
    case Terminal::ConvergedNontrivial: return "ConvergedNontrivial";
    case Terminal::MaxStepsReached: return "MaxStepsReached";
  }
  return "unknown";
}

Evolver::Evolver(std::shared_ptr<const Discretization> mesh, bool parallel)
    : mesh_(std::move(mesh)), parallel_(parallel), k_free_(mesh_->free_stiffness()) {
  rhs_.resize(static_cast<Eigen::Index>(mesh_->node_count()));
}

const Evolver::Solver& Evolver::factor(double dt) {
  auto it = factors_.find(dt);
  if (it != factors_.end()) return *it->second;
  const auto& free = mesh_->free_nodes();
  Eigen::SparseMatrix<double> a = dt * k_free_;
  for (std::size_t i = 0; i < free.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a.coeffRef(r, r) += mesh_->mass()[static_cast<Eigen::Index>(free[i])];
  }
  auto solver = std::make_unique<Solver>(a);
  if (solver->info() != Eigen::Success) {
    throw Error(ErrorCode::LinearSolveFailure, "factorization of M + dt K failed");
  }
  return *factors_.emplace(dt, std::move(solver)).first->second;
}

Field Evolver::step(const Field& u, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidDomain, "dt must be positive");
  const auto& solver = factor(dt);
  if (parallel_) {
    kernels::explicit_reaction(view(u.values), view(mesh_->mass()), dt, view(rhs_));
  } else {
    kernels::explicit_reaction_serial(view(u.values), view(mesh_->mass()), dt, view(rhs_));
  }
  const auto& free = mesh_->free_nodes();
  Eigen::VectorXd b(static_cast<Eigen::Index>(free.size()));
  for (std::size_t i = 0; i < free.size(); ++i) {
    b[static_cast<Eigen::Index>(i)] = rhs_[static_cast<Eigen::Index>(free[i])];
  }
  const Eigen::VectorXd x = solver.solve(b);
  if (solver.info() != Eigen::Success || !x.allFinite()) {
    throw Error(ErrorCode::LinearSolveFailure, "implicit diffusion solve failed");
  }
  Field out = Field::zeros(mesh_);
  for (std::size_t i = 0; i < free.size(); ++i) {
    out.values[static_cast<Eigen::Index>(free[i])] = x[static_cast<Eigen::Index>(i)];
  }
  return out;
}

Field step(const Field& u, double dt) {
  Evolver ev(u.mesh);
  return ev.step(u, dt);
}

double energy_trace(const Field& u) {
  return kernels::free_energy(u.mesh->stiffness(), view(u.mesh->mass()), view(u.values));
}

double logistic_bound_step(double ubar, double dt) { return ubar + dt * ubar * (1.0 - ubar); }

bool comparison_monitor(const Field& u, double bound, ComparisonReport& report, double slack) {
  const double lo = u.min();
  const double hi = u.max();
  report.min_value = std::min(report.min_value, lo);
  report.max_excess = std::max(report.max_excess, hi - bound);
  report.bound = bound;
  return lo >= -slack && hi <= bound + slack * std::max(1.0, bound);
}

EvolutionTrace run_to_attractor(const Field& u0, const EvolveOptions& opt) {
  if (u0.min() < 0.0) {
    throw Error(ErrorCode::NegativeInitialData, "initial data must be nonnegative");
  }
  if (!(opt.dt > 0.0) || !(opt.tol > 0.0) || !(opt.max_t > 0.0)) {
    throw Error(ErrorCode::InvalidDomain, "dt, tol and max_t must be positive");
  }
  Evolver ev(u0.mesh, opt.parallel);
  EvolutionTrace tr;
  Field u = u0;
  for (std::size_t n = 0; n < u0.mesh->node_count(); ++n) {
    if (u0.mesh->is_dirichlet(n)) u.values[static_cast<Eigen::Index>(n)] = 0.0;
  }
  double t = 0.0;
  double dt = opt.dt;
  double ubar = std::max(1.0, u.max());
  double last_change = 0.0;
  double last_dt = 0.0;
  tr.comparison.min_value = u.min();
  tr.comparison.max_excess = u.max() - ubar;
  tr.comparison.bound = ubar;

  auto record = [&](const Field& f) {
    tr.times.push_back(t);
    tr.energy.push_back(energy_trace(f));
    tr.sup_norm.push_back(f.sup_norm());
  };
  record(u);

  tr.terminal = Terminal::MaxStepsReached;
  while (true) {
    const double sup = u.sup_norm();
    if (sup <= 10.0 * opt.tol) {
      tr.terminal = Terminal::ConvergedTrivial;
      break;
    }
    if (t >= opt.max_t) break;

    Field next = ev.step(u, dt);
    const double next_bar = logistic_bound_step(ubar, dt);
    if (!comparison_monitor(next, next_bar, tr.comparison)) {
      ++tr.comparison.violations;
      dt *= 0.5;
      if (dt < opt.min_dt) {
        tr.comparison.ok = false;
        throw Error(ErrorCode::ComparisonViolated,
                    "bound 0 <= u <= " + std::to_string(next_bar) + " fails at t = " +
                        std::to_string(t));
      }
      continue;
    }
    const double change = opt.parallel
                              ? kernels::max_abs_diff(view(next.values), view(u.values))
                              : kernels::max_abs_diff_serial(view(next.values), view(u.values));
    tr.stationarity = change / dt;
    // Remaining displacement if the changes keep contracting geometrically.
    const double ratio = last_change > 0.0 && last_dt == dt ? change / last_change : 1.0;
    const double tail = ratio < 1.0 ? change * ratio / (1.0 - ratio) : kInf;
    last_change = change;
    last_dt = dt;
    u = std::move(next);
    ubar = next_bar;
    t += dt;
    record(u);
    const double target = opt.tol * std::min(1.0, u.sup_norm());
    if (tr.stationarity <= target && (tail <= target || change <= kRoundoff * u.sup_norm()) &&
        u.sup_norm() > 10.0 * opt.tol) {
      tr.terminal = Terminal::ConvergedNontrivial;
      break;
    }
  }
  tr.dt = dt;
  tr.final_field = std::move(u);
  return tr;
}

Field hat_field(std::shared_ptr<const Discretization> mesh, double amplitude) {
  const auto& g = mesh->graph();
  return Field::sample(mesh, [&](std::size_t e, double x) {
    const auto& edge = g.edges()[e];
    const bool from_d = g.condition(edge.from) == VertexCondition::Dirichlet;
    const bool to_d = g.condition(edge.to) == VertexCondition::Dirichlet;
    const double s = x / edge.length;
    double w = 1.0;
    if (from_d && to_d) {
      w = 2.0 * std::min(s, 1.0 - s);
    } else if (from_d) {
      w = s;
    } else if (to_d) {
      w = 1.0 - s;
    }
    return amplitude * w;
  });
}

Field field_from_samples(std::shared_ptr<const Discretization> mesh,
                         const std::vector<EdgeSample>& samples) {
  const auto& edges = mesh->graph().edges();
  std::vector<std::vector<std::pair<double, double>>> per_edge(edges.size());
  for (const auto& s : samples) {
    per_edge[mesh->graph().edge_index(s.edge_id)].emplace_back(s.x, s.u);
  }
  for (auto& v : per_edge) std::sort(v.begin(), v.end());
  return Field::sample(mesh, [&](std::size_t e, double x) {
    const auto& v = per_edge[e];
    if (v.empty()) return 0.0;
    if (x <= v.front().first) return v.front().second;
    if (x >= v.back().first) return v.back().second;
    const auto it = std::lower_bound(v.begin(), v.end(), std::pair<double, double>{x, -1e300});
    const auto& [x1, u1] = *it;
    const auto& [x0, u0] = *(it - 1);
    if (x1 == x0) return u1;
    return u0 + (u1 - u0) * (x - x0) / (x1 - x0);
  });
}

Field field_from_profile(std::shared_ptr<const Discretization> mesh,
                         const GroundStateSolution& solution) {
  const auto& edges = mesh->graph().edges();
  return Field::sample(mesh, [&](std::size_t e, double x) {
    return profile_value(solution, edges[e].id, x);
  });
}

}  // namespace fkpp
