#include "fkpp/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fkpp {

using nlohmann::json;

namespace {

VertexCondition parse_condition(const std::string& s) {
  if (s == "dirichlet") return VertexCondition::Dirichlet;
  if (s == "kirchhoff" || s == "neumann") return VertexCondition::Kirchhoff;
  throw Error(ErrorCode::ParseError, "unknown vertex condition '" + s + "'");
}

MetricGraph from_flower(const json& f) {
  FlowerSpec spec;
  spec.stem_length = f.at("stem").get<double>();
  if (f.contains("loops")) {
    for (const auto& total : f.at("loops")) spec.loop_half_lengths.push_back(0.5 * total.get<double>());
  }
  return to_graph(spec);
}

}  // namespace

MetricGraph parse_graph_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    if (doc.contains("flower")) return from_flower(doc.at("flower"));

    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      edges.push_back({e.at("id").get<std::string>(), e.at("from").get<std::string>(),
                       e.at("to").get<std::string>(), e.at("length").get<double>()});
    }
    std::map<std::string, VertexCondition> conditions;
    if (doc.contains("conditions")) {
      for (const auto& [v, c] : doc.at("conditions").items()) {
        conditions[v] = parse_condition(c.get<std::string>());
      }
    }
    return MetricGraph(std::move(edges), std::move(conditions));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

MetricGraph load_graph_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph_json(buf.str());
}

std::string graph_to_json(const MetricGraph& graph) {
  json doc;
  doc["schema"] = 1;
  doc["edges"] = json::array();
  for (const auto& e : graph.edges()) {
    doc["edges"].push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"length", e.length}});
  }
  doc["conditions"] = json::object();
  for (const auto& v : graph.vertices()) {
    doc["conditions"][v] =
        graph.condition(v) == VertexCondition::Dirichlet ? "dirichlet" : "kirchhoff";
  }
  return doc.dump(2);
}

}  // namespace fkpp
