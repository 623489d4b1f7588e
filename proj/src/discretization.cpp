#include "fkpp/discretization.hpp"

#include <algorithm>
#include <cmath>

#include "fkpp/error.hpp"

namespace fkpp {

namespace {
constexpr int kMinCells = 5;  // at least four interior nodes per edge
}

Discretization::Discretization(const MetricGraph& graph, double mesh_h) : graph_(graph) {
  require_valid(graph_);
  if (!(mesh_h > 0.0)) throw Error(ErrorCode::MeshTooCoarse, "mesh_h must be positive");
  for (const auto& e : graph_.edges()) {
    const int n = static_cast<int>(std::ceil(e.length / mesh_h - 1e-9));
    if (n < kMinCells) {
      throw Error(ErrorCode::MeshTooCoarse,
                  "edge " + e.id + " gets " + std::to_string(n) + " cells, need " +
                      std::to_string(kMinCells));
    }
    cells_.push_back(n);
  }
  build();
}

Discretization::Discretization(const MetricGraph& graph, std::vector<int> cells)
    : graph_(graph), cells_(std::move(cells)) {
  require_valid(graph_);
  if (cells_.size() != graph_.edges().size()) {
    throw Error(ErrorCode::MalformedGraph, "one cell count per edge required");
  }
  for (int n : cells_) {
    if (n < kMinCells) throw Error(ErrorCode::MeshTooCoarse, "too few cells on an edge");
  }
  build();
}

double Discretization::step(std::size_t edge) const {
  return graph_.edges()[edge].length / cells_[edge];
}

double Discretization::max_step() const {
  double h = 0.0;
  for (std::size_t e = 0; e < cells_.size(); ++e) h = std::max(h, step(e));
  return h;
}

std::size_t Discretization::node(std::size_t edge, int k) const {
  const auto& e = graph_.edges()[edge];
  if (k == 0) return graph_.vertex_index(e.from);
  if (k == cells_[edge]) return graph_.vertex_index(e.to);
  return edge_offset_[edge] + static_cast<std::size_t>(k - 1);
}

void Discretization::build() {
  const auto& edges = graph_.edges();
  std::size_t n = graph_.vertices().size();
  edge_offset_.clear();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    edge_offset_.push_back(n);
    n += static_cast<std::size_t>(cells_[e] - 1);
  }
  mass_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double h = step(e);
    for (int k = 0; k < cells_[e]; ++k) {
      const auto a = static_cast<Eigen::Index>(node(e, k));
      const auto b = static_cast<Eigen::Index>(node(e, k + 1));
      mass_[a] += 0.5 * h;
      mass_[b] += 0.5 * h;
      triplets.emplace_back(a, a, 1.0 / h);
      triplets.emplace_back(b, b, 1.0 / h);
      triplets.emplace_back(a, b, -1.0 / h);
      triplets.emplace_back(b, a, -1.0 / h);
    }
  }
  stiffness_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  stiffness_.setFromTriplets(triplets.begin(), triplets.end());

  dirichlet_.assign(n, false);
  for (const auto& v : graph_.vertices()) {
    if (graph_.condition(v) == VertexCondition::Dirichlet) dirichlet_[graph_.vertex_index(v)] = true;
  }
  free_.clear();
  free_index_.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!dirichlet_[i]) {
      free_index_[i] = static_cast<long>(free_.size());
      free_.push_back(i);
    }
  }
}

Eigen::SparseMatrix<double> Discretization::free_stiffness() const {
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index row = 0; row < stiffness_.outerSize(); ++row) {
    const long r = free_index_[static_cast<std::size_t>(row)];
    if (r < 0) continue;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(stiffness_, row); it; ++it) {
      const long c = free_index_[static_cast<std::size_t>(it.col())];
      if (c >= 0) triplets.emplace_back(r, c, it.value());
    }
  }
  const auto m = static_cast<Eigen::Index>(free_.size());
  Eigen::SparseMatrix<double> k(m, m);
  k.setFromTriplets(triplets.begin(), triplets.end());
  return k;
}

Field Field::zeros(std::shared_ptr<const Discretization> mesh) {
  Field f;
  f.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh->node_count()));
  f.mesh = std::move(mesh);
  return f;
}

std::vector<EdgeSample> Field::edge_samples() const {
  std::vector<EdgeSample> out;
  const auto& edges = mesh->graph().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double h = mesh->step(e);
    for (int k = 0; k <= mesh->cells(e); ++k) {
      out.push_back({edges[e].id, k * h, values[static_cast<Eigen::Index>(mesh->node(e, k))]});
    }
  }
  return out;
}

double Field::l2_norm() const {
  return std::sqrt((mesh->mass().array() * values.array().square()).sum());
}

double evaluate(const Field& field, std::size_t edge, double x) {
  const auto& mesh = *field.mesh;
  const double h = mesh.step(edge);
  const int n = mesh.cells(edge);
  const double t = std::clamp(x / h, 0.0, static_cast<double>(n));
  const int k = std::min(static_cast<int>(t), n - 1);
  const double w = t - k;
  const double a = field.values[static_cast<Eigen::Index>(mesh.node(edge, k))];
  const double b = field.values[static_cast<Eigen::Index>(mesh.node(edge, k + 1))];
  return (1.0 - w) * a + w * b;
}

}  // namespace fkpp
