#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "fkpp/graph.hpp"

namespace fkpp {

/// Uniform per-edge mesh of a metric graph with lumped-mass P1 operators.
///
/// Node layout: one node per vertex (in MetricGraph::vertices() order), then
/// the interior nodes of each edge, contiguous and ordered from `from` to
/// `to`. Edge e is cut into cells(e) >= 5 cells of width length / cells(e) <=
/// mesh_h. The stiffness row of an interior node is the three-point stencil;
/// a vertex row sums one-sided differences over incident edge ends (Kirchhoff
/// flux balance), so K is symmetric positive semidefinite and the lumped mass
/// carries half a cell per incident edge end at each vertex.
class Discretization {
 public:
  Discretization(const MetricGraph& graph, double mesh_h);
  /// Prescribed cell counts, one per edge; used to perturb a length without
  /// changing the mesh topology.
  Discretization(const MetricGraph& graph, std::vector<int> cells);

  const MetricGraph& graph() const { return graph_; }
  std::size_t node_count() const { return mass_.size(); }
  int cells(std::size_t edge) const { return cells_[edge]; }
  const std::vector<int>& cells() const { return cells_; }
  double step(std::size_t edge) const;
  double max_step() const;

  /// Global node of point k (0..cells) along edge `edge`.
  std::size_t node(std::size_t edge, int k) const;

  const Eigen::VectorXd& mass() const { return mass_; }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& stiffness() const { return stiffness_; }

  bool is_dirichlet(std::size_t node) const { return dirichlet_[node]; }
  /// Free (non-Dirichlet) nodes and the inverse map (-1 for Dirichlet nodes).
  const std::vector<std::size_t>& free_nodes() const { return free_; }
  const std::vector<long>& free_index() const { return free_index_; }

  /// Stiffness restricted to free nodes.
  Eigen::SparseMatrix<double> free_stiffness() const;

 private:
  void build();

  MetricGraph graph_;
  std::vector<int> cells_;
  std::vector<std::size_t> edge_offset_;
  Eigen::VectorXd mass_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> stiffness_;
  std::vector<bool> dirichlet_;
  std::vector<std::size_t> free_;
  std::vector<long> free_index_;
};

struct EdgeSample {
  std::string edge_id;
  double x = 0.0;
  double u = 0.0;
};

/// Function on the mesh; vertex values are stored once, so continuity holds
/// by construction.
struct Field {
  std::shared_ptr<const Discretization> mesh;
  Eigen::VectorXd values;

  static Field zeros(std::shared_ptr<const Discretization> mesh);
  /// Samples f(edge_index, x) at every node, x measured from the edge's
  /// `from` vertex; Dirichlet nodes are pinned to 0.
  template <class F>
  static Field sample(std::shared_ptr<const Discretization> mesh, F f);

  double sup_norm() const { return values.cwiseAbs().maxCoeff(); }
  double min() const { return values.minCoeff(); }
  double max() const { return values.maxCoeff(); }
  /// Every node listed per edge, including both endpoint vertices.
  std::vector<EdgeSample> edge_samples() const;
  /// Sqrt of sum(mass * u^2).
  double l2_norm() const;
};

template <class F>
Field Field::sample(std::shared_ptr<const Discretization> mesh, F f) {
  Field field = zeros(mesh);
  const auto& edges = mesh->graph().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double h = mesh->step(e);
    for (int k = 0; k <= mesh->cells(e); ++k) {
      const auto n = mesh->node(e, k);
      field.values[n] = mesh->is_dirichlet(n) ? 0.0 : f(e, k * h);
    }
  }
  return field;
}

/// Piecewise-linear evaluation of a field at position x along an edge.
double evaluate(const Field& field, std::size_t edge, double x);

}  // namespace fkpp
