#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fkpp/discretization.hpp"
#include "fkpp/graph.hpp"

namespace fkpp::cli {

/// Parsed command line. Unset numeric options fall back to per-command
/// defaults.
struct RunConfig {
  std::string subcommand;
  std::optional<std::string> graph_path;
  std::vector<std::string> flower_tokens;
  std::optional<double> tol;
  std::optional<double> mesh_h;
  double dt = 0.1;
  double max_t = 1e4;
  std::string format = "json";
  std::string output;   // empty: stdout
  std::string profile;  // groundstate profile CSV
  std::string trace;    // evolve trace CSV
  std::string field;    // evolve terminal field CSV
  std::string u0 = "hat";
  double amplitude = 0.5;
  std::uint64_t seed = 1;
  int jobs = 0;
  std::vector<std::string> suites;
  std::string mode = "symmetric";
  std::vector<int> loop_counts = {1, 5};
  std::vector<double> loop_half_lengths;
  int samples = 50;
};

/// `stem=0.8 loops=1.5,1.0`: loop values are total loop lengths. Tokens may
/// also arrive as one space-separated string.
FlowerSpec parse_flower_tokens(const std::vector<std::string>& tokens);

/// Graph from whichever source the config names; Error(ParseError) if none or
/// both are given.
MetricGraph load_graph(const RunConfig& config);

/// CSV `edge_id,x,u` with header.
void write_samples_csv(std::ostream& out, const std::vector<EdgeSample>& samples);
std::vector<EdgeSample> read_samples_csv(const std::string& path);

/// Full command line (argv[0] excluded). Returns the process exit code:
/// 0 success, 1 module error or failed validation, 2 parse error,
/// 3 below threshold / outside region, 4 graph is not a flower.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fkpp::cli
