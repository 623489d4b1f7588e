#include "fkpp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fkpp {

MetricGraph::MetricGraph(std::vector<Edge> edges,
                         std::map<std::string, VertexCondition> conditions)
    : edges_(std::move(edges)), conditions_(std::move(conditions)) {
  auto add = [this](const std::string& v) {
    if (std::find(vertices_.begin(), vertices_.end(), v) == vertices_.end()) {
      vertices_.push_back(v);
    }
  };
  for (const auto& e : edges_) {
    add(e.from);
    add(e.to);
  }
  // Vertices named only in the condition map are kept so validation can
  // report them as disconnected.
  for (const auto& [v, c] : conditions_) add(v);
}

VertexCondition MetricGraph::condition(const std::string& vertex) const {
  auto it = conditions_.find(vertex);
  return it == conditions_.end() ? VertexCondition::Kirchhoff : it->second;
}

int MetricGraph::degree(const std::string& vertex) const {
  int d = 0;
  for (const auto& e : edges_) {
    if (e.from == vertex) ++d;
    if (e.to == vertex) ++d;
  }
  return d;
}

std::size_t MetricGraph::vertex_index(const std::string& vertex) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), vertex);
  if (it == vertices_.end()) throw Error(ErrorCode::MalformedGraph, "unknown vertex " + vertex);
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t MetricGraph::edge_index(const std::string& edge_id) const {
  auto it = std::find_if(edges_.begin(), edges_.end(),
                         [&](const Edge& e) { return e.id == edge_id; });
  if (it == edges_.end()) throw Error(ErrorCode::MalformedGraph, "unknown edge " + edge_id);
  return static_cast<std::size_t>(it - edges_.begin());
}

MetricGraph MetricGraph::with_edge_length(const std::string& edge_id, double length) const {
  auto edges = edges_;
  edges[edge_index(edge_id)].length = length;
  return MetricGraph(std::move(edges), conditions_);
}

MetricGraph MetricGraph::scaled(double factor) const {
  auto edges = edges_;
  for (auto& e : edges) e.length *= factor;
  return MetricGraph(std::move(edges), conditions_);
}

ValidationReport validate(const MetricGraph& graph) {
  ValidationReport report;
  const auto& verts = graph.vertices();
  for (const auto& v : verts) report.degrees[v] = graph.degree(v);

  for (const auto& e : graph.edges()) {
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      report.problems.push_back({ErrorCode::NonpositiveLength,
                                 "edge " + e.id + " has non-positive or non-finite length"});
    }
  }
  std::vector<std::string> ids;
  for (const auto& e : graph.edges()) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    report.problems.push_back({ErrorCode::MalformedGraph, "duplicate edge id"});
  }

  // Union-find over vertex indices.
  std::vector<std::size_t> parent(verts.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& e : graph.edges()) {
    parent[find(graph.vertex_index(e.from))] = find(graph.vertex_index(e.to));
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < verts.size(); ++i) roots += (find(i) == i);
  report.connected = roots == 1;
  if (!report.connected) {
    report.problems.push_back({ErrorCode::DisconnectedGraph,
                               "graph has " + std::to_string(roots) + " components"});
  }

  for (const auto& v : verts) {
    if (graph.condition(v) != VertexCondition::Dirichlet) continue;
    if (report.degrees[v] == 1) {
      ++report.pendant_count;
    } else {
      report.problems.push_back(
          {ErrorCode::NoPendant, "Dirichlet vertex " + v + " is not a degree-1 boundary vertex"});
    }
  }
  if (report.pendant_count == 0) {
    report.problems.push_back({ErrorCode::NoPendant, "no Dirichlet pendant vertex"});
  }

  // Report in priority order so require_valid surfaces the most basic issue.
  std::stable_sort(report.problems.begin(), report.problems.end(),
                   [](const GraphProblem& a, const GraphProblem& b) {
                     auto rank = [](ErrorCode c) {
                       switch (c) {
                         case ErrorCode::MalformedGraph: return 0;
                         case ErrorCode::NonpositiveLength: return 1;
                         case ErrorCode::DisconnectedGraph: return 2;
                         default: return 3;
                       }
                     };
                     return rank(a.code) < rank(b.code);
                   });
  report.valid = report.problems.empty();
  return report;
}

void require_valid(const MetricGraph& graph) {
  auto report = validate(graph);
  if (!report.valid) {
    throw Error(report.problems.front().code, report.problems.front().message);
  }
}

std::optional<FlowerSpec> as_flower(const MetricGraph& graph) {
  const auto& edges = graph.edges();
  const Edge* stem = nullptr;
  std::string center;
  for (const auto& e : edges) {
    if (e.is_loop()) continue;
    if (stem != nullptr) return std::nullopt;
    stem = &e;
  }
  if (stem == nullptr) return std::nullopt;

  const bool from_root = graph.condition(stem->from) == VertexCondition::Dirichlet;
  const bool to_root = graph.condition(stem->to) == VertexCondition::Dirichlet;
  if (from_root == to_root) return std::nullopt;
  center = from_root ? stem->to : stem->from;
  const std::string root = from_root ? stem->from : stem->to;
  if (graph.degree(root) != 1) return std::nullopt;
  if (graph.condition(center) != VertexCondition::Kirchhoff) return std::nullopt;

  FlowerSpec spec;
  spec.stem_length = stem->length;
  for (const auto& e : edges) {
    if (!e.is_loop()) continue;
    if (e.from != center) return std::nullopt;
    spec.loop_half_lengths.push_back(0.5 * e.length);
  }
  if (graph.vertices().size() != 2) return std::nullopt;
  return spec;
}

MetricGraph to_graph(const FlowerSpec& spec) {
  std::vector<Edge> edges;
  edges.push_back({"stem", "root", "center", spec.stem_length});
  for (std::size_t j = 0; j < spec.loop_half_lengths.size(); ++j) {
    edges.push_back({"loop" + std::to_string(j + 1), "center", "center",
                     2.0 * spec.loop_half_lengths[j]});
  }
  return MetricGraph(std::move(edges), {{"root", VertexCondition::Dirichlet},
                                        {"center", VertexCondition::Kirchhoff}});
}

void check_flower(const FlowerSpec& spec) {
  if (!(spec.stem_length > 0.0) || !std::isfinite(spec.stem_length)) {
    throw Error(ErrorCode::InvalidDomain, "flower stem length must be positive");
  }
  for (double l : spec.loop_half_lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw Error(ErrorCode::InvalidDomain, "flower loop half-length must be positive");
    }
  }
}

}  // namespace fkpp
