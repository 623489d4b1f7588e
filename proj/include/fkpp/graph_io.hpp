#pragma once

#include <string>

#include "fkpp/graph.hpp"

namespace fkpp {

/// Parses either the explicit form
///   {"edges":[{"id":"e1","from":"v0","to":"v1","length":2.0}],
///    "conditions":{"v0":"dirichlet","v1":"kirchhoff"}}
/// or the flower shorthand {"flower":{"stem":0.8,"loops":[1.5]}} whose loop
/// entries are TOTAL loop lengths. Throws Error(ParseError) on bad input.
MetricGraph parse_graph_json(const std::string& text);
MetricGraph load_graph_json(const std::string& path);

/// Explicit form, with "schema":1.
std::string graph_to_json(const MetricGraph& graph);

}  // namespace fkpp
