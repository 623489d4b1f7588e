#include "fkpp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SparseCholesky>

#include "fkpp/error.hpp"

namespace fkpp {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

// 2 sum tan(s L_j) - cot(s L): increasing on the admissible window.
double secular(const FlowerSpec& spec, double s) {
  double sum = 0.0;
  for (double lj : spec.loop_half_lengths) sum += std::tan(s * lj);
  return 2.0 * sum - 1.0 / std::tan(s * spec.stem_length);
}

std::vector<int> cells_for(const MetricGraph& graph, double h) {
  std::vector<int> cells;
  for (const auto& e : graph.edges()) {
    cells.push_back(std::max(5, static_cast<int>(std::ceil(e.length / h - 1e-9))));
  }
  return cells;
}

}  // namespace

SpectralResult lambda0_flower(const FlowerSpec& spec, double tol, double sample_h) {
  check_flower(spec);
  const double stem = spec.stem_length;
  double s_max = kHalfPi / stem;
  for (double lj : spec.loop_half_lengths) s_max = std::min(s_max, kHalfPi / lj);

  double s = s_max;
  double width = 0.0;
  if (!spec.is_interval()) {
    const double eps = 1e-12 * s_max;
    double lo = eps;
    double hi = s_max - eps;
    while (hi - lo > 0.25 * tol / s_max && hi - lo > 4e-16 * hi) {
      const double mid = 0.5 * (lo + hi);
      (secular(spec, mid) > 0.0 ? hi : lo) = mid;
    }
    s = 0.5 * (lo + hi);
    width = (hi - lo) * (hi + lo);
  }

  SpectralResult result;
  result.lambda0 = s * s;
  result.method = SpectralMethod::Transcendental;
  result.residual = width;

  // Closed-form eigenfunction, normalized analytically.
  double norm2 = 0.5 * stem - std::sin(2.0 * s * stem) / (4.0 * s);
  std::vector<double> amp;
  for (double lj : spec.loop_half_lengths) {
    const double c = std::sin(s * stem) / std::cos(s * lj);
    amp.push_back(c);
    norm2 += c * c * (lj + std::sin(2.0 * s * lj) / (2.0 * s));
  }
  const double scale = 1.0 / std::sqrt(norm2);
  const auto graph = to_graph(spec);
  auto mesh = std::make_shared<const Discretization>(graph, cells_for(graph, sample_h));
  result.eigenfunction = Field::sample(mesh, [&](std::size_t e, double x) {
    if (e == 0) return scale * std::sin(s * x);
    const double lj = spec.loop_half_lengths[e - 1];
    return scale * amp[e - 1] * std::cos(s * (x - lj));
  });
  return result;
}

SpectralResult lambda0_discretized(std::shared_ptr<const Discretization> mesh) {
  const auto k = mesh->free_stiffness();
  const auto& free = mesh->free_nodes();
  const auto m = static_cast<Eigen::Index>(free.size());
  Eigen::VectorXd inv_sqrt_mass(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    inv_sqrt_mass[i] = 1.0 / std::sqrt(mesh->mass()[static_cast<Eigen::Index>(free[i])]);
  }
  // Symmetric form M^{-1/2} K M^{-1/2}.
  Eigen::SparseMatrix<double> a = inv_sqrt_mass.asDiagonal() * k * inv_sqrt_mass.asDiagonal();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::LinearSolveFailure, "factorization of the graph Laplacian failed");
  }
  // Infinity norm, so the residual test is relative to the stencil scale 1/h^2.
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(m);
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it) {
      row_sums[it.row()] += std::abs(it.value());
    }
  }
  const double a_norm = row_sums.maxCoeff();

  Eigen::VectorXd x = (1.0 / inv_sqrt_mass.array()).matrix();
  x.normalize();
  double lambda = x.dot(a * x);
  double residual = 0.0;
  int it = 0;
  for (; it < 5000; ++it) {
    Eigen::VectorXd y = solver.solve(x);
    y.normalize();
    const Eigen::VectorXd ay = a * y;
    const double next = y.dot(ay);
    residual = (ay - next * y).norm();
    const double change = std::abs(next - lambda);
    x = std::move(y);
    lambda = next;
    if (change <= 1e-12 * lambda && residual <= 1e-10 * a_norm) break;
  }

  SpectralResult result;
  result.lambda0 = lambda;
  result.method = SpectralMethod::Discretized;
  result.residual = residual;
  result.iterations = it + 1;
  result.eigenfunction = Field::zeros(mesh);
  const double sign = x.sum() >= 0.0 ? 1.0 : -1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    result.eigenfunction.values[static_cast<Eigen::Index>(free[i])] = sign * x[i] * inv_sqrt_mass[i];
  }
  return result;
}

SpectralResult lambda0_discretized(const MetricGraph& graph, double mesh_h) {
  return lambda0_discretized(std::make_shared<const Discretization>(graph, mesh_h));
}

std::pair<double, double> eigenvalue_length_slope(const MetricGraph& graph,
                                                  const std::string& edge_id, double mesh_h) {
  auto base = std::make_shared<const Discretization>(graph, mesh_h);
  const auto e = graph.edge_index(edge_id);
  const double length = graph.edges()[e].length;
  const double delta = 1e-4 * length;

  auto perturbed = [&](double len) {
    return lambda0_discretized(
               std::make_shared<const Discretization>(graph.with_edge_length(edge_id, len),
                                                      base->cells()))
        .lambda0;
  };
  const double lhs = (perturbed(length + delta) - perturbed(length - delta)) / (2.0 * delta);

  const auto eig = lambda0_discretized(base);
  const auto& psi = eig.eigenfunction.values;
  const int n = base->cells(e);
  const double h = base->step(e);
  auto at = [&](int k) { return psi[static_cast<Eigen::Index>(base->node(e, k))]; };
  const double value = at(n);
  const double slope = (3.0 * at(n) - 4.0 * at(n - 1) + at(n - 2)) / (2.0 * h);
  const double rhs = -slope * slope - eig.lambda0 * value * value;
  return {lhs, rhs};
}

RegionVerdict region_membership(const FlowerSpec& spec) {
  RegionVerdict verdict;
  verdict.lambda0 = lambda0_flower(spec).lambda0;
  verdict.region = verdict.lambda0 < 1.0 ? Region::Nontrivial : Region::Trivial;
  verdict.on_boundary = std::abs(verdict.lambda0 - 1.0) <= 1e-10;
  return verdict;
}

double lower_boundary(const std::vector<double>& loop_half_lengths) {
  double sum = 0.0;
  for (double lj : loop_half_lengths) {
    if (!(lj >= 0.0 && lj < kHalfPi)) {
      throw Error(ErrorCode::LoopTooLong, "loop half-length must lie in [0, pi/2)");
    }
    sum += std::tan(lj);
  }
  return std::atan2(1.0, 2.0 * sum);  // arccot on [0, inf)
}

double lower_boundary_symmetric(double stem_length, int loops) {
  if (loops < 1 || !(stem_length >= 0.0)) {
    throw Error(ErrorCode::InvalidDomain, "need N >= 1 and L >= 0");
  }
  if (stem_length >= kHalfPi) return 0.0;
  return std::atan2(std::cos(stem_length), 2.0 * loops * std::sin(stem_length));
}

}  // namespace fkpp
