#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fkpp/discretization.hpp"
#include "fkpp/graph.hpp"

namespace fkpp {

enum class SpectralMethod { Transcendental, Discretized };

struct SpectralResult {
  double lambda0 = 0.0;
  Field eigenfunction;  // positive, unit L2 norm under the lumped mass
  SpectralMethod method = SpectralMethod::Transcendental;
  double residual = 0.0;
  int iterations = 0;
};

/// Lowest eigenvalue of -Laplacian on a flower from the secular equation
///   2 sum_j tan(sqrt(lambda) L_j) = cot(sqrt(lambda) L),
/// bisected on sqrt(lambda) in (0, min(pi/2L, pi/2L_j)). The closed-form
/// eigenfunction (sin on the stem, cos on the loops) is sampled on a mesh of
/// width sample_h of to_graph(spec). `residual` is the final bracket width in
/// lambda.
SpectralResult lambda0_flower(const FlowerSpec& spec, double tol = 1e-14, double sample_h = 1e-2);

/// Lowest eigenvalue of the lumped-mass discretization by inverse iteration.
SpectralResult lambda0_discretized(const MetricGraph& graph, double mesh_h);
SpectralResult lambda0_discretized(std::shared_ptr<const Discretization> mesh);

/// Both sides of d lambda0 / d L = -|psi'(L)|^2 - lambda0 |psi(L)|^2 for one
/// edge, L measured at the edge's `to` end. first: central difference of the
/// discretized lambda0 (step 1e-4 L, fixed cell counts); second: the
/// right-hand side from the discrete eigenfunction.
std::pair<double, double> eigenvalue_length_slope(const MetricGraph& graph,
                                                  const std::string& edge_id, double mesh_h);

enum class Region { Trivial, Nontrivial };

struct RegionVerdict {
  Region region = Region::Trivial;
  bool on_boundary = false;  // |lambda0 - 1| <= 1e-10
  double lambda0 = 0.0;
};

RegionVerdict region_membership(const FlowerSpec& spec);

/// Critical stem length arccot(2 sum tan L_j) at which lambda0 = 1.
/// Throws Error(LoopTooLong) if some L_j >= pi/2 (or is negative).
double lower_boundary(const std::vector<double>& loop_half_lengths);

/// Critical half-loop length arctan(cot(L) / 2N) of the symmetric flower; 0
/// once L >= pi/2.
double lower_boundary_symmetric(double stem_length, int loops);

}  // namespace fkpp
