#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fkpp/error.hpp"

namespace fkpp {

enum class VertexCondition { Dirichlet, Kirchhoff };

struct Edge {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;

  bool is_loop() const { return from == to; }
};

/// Compact metric graph: edges are intervals [0, length] oriented from -> to.
/// Vertices not listed in `conditions` default to Kirchhoff.
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<Edge> edges, std::map<std::string, VertexCondition> conditions);

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& vertices() const { return vertices_; }
  VertexCondition condition(const std::string& vertex) const;
  const std::map<std::string, VertexCondition>& conditions() const { return conditions_; }

  /// Self-loops count twice.
  int degree(const std::string& vertex) const;
  std::size_t vertex_index(const std::string& vertex) const;
  std::size_t edge_index(const std::string& edge_id) const;

  /// Copy with one edge length replaced.
  MetricGraph with_edge_length(const std::string& edge_id, double length) const;
  /// Copy with every length multiplied by `factor`.
  MetricGraph scaled(double factor) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::string> vertices_;
  std::map<std::string, VertexCondition> conditions_;
};

/// Stem [0, L] with Dirichlet at 0, joined at x = L to N loops of
/// half-lengths L_j (each loop parameterized as [-L_j, L_j]).
struct FlowerSpec {
  double stem_length = 0.0;
  std::vector<double> loop_half_lengths;

  std::size_t loop_count() const { return loop_half_lengths.size(); }
  bool is_interval() const { return loop_half_lengths.empty(); }
};

struct GraphProblem {
  ErrorCode code;
  std::string message;
};

struct ValidationReport {
  bool valid = false;
  bool connected = false;
  int pendant_count = 0;
  std::map<std::string, int> degrees;
  std::vector<GraphProblem> problems;
};

/// Never throws; the report lists every violated invariant.
ValidationReport validate(const MetricGraph& graph);

/// Throws Error carrying the code of the first problem in the report.
void require_valid(const MetricGraph& graph);

/// Recognizes one Dirichlet pendant stem plus N self-loops at one interior
/// vertex. Loops of total length 2 L_j map to half-length L_j.
std::optional<FlowerSpec> as_flower(const MetricGraph& graph);

/// Inverse of as_flower: stem "stem" from "root" (Dirichlet) to "center",
/// loops "loop1".."loopN" at "center" with total length 2 L_j.
MetricGraph to_graph(const FlowerSpec& spec);

/// Throws Error(InvalidDomain) unless stem > 0 and every half-length > 0.
void check_flower(const FlowerSpec& spec);

}  // namespace fkpp
