#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fkpp/error.hpp"
#include "fkpp/spectral.hpp"
#include "oracles.hpp"

using namespace fkpp;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("interval closed form") {
  for (double L : {0.5, 1.0, 2.0, 7.0}) {
    CHECK(lambda0_flower({L, {}}).lambda0 == doctest::Approx(kPi * kPi / (4 * L * L)).epsilon(1e-13));
  }
  CHECK(lambda0_flower({kPi / 2, {}}).lambda0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("flower roots against TOMS 748") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> len(0.1, 2.0);
  for (int i = 0; i < 30; ++i) {
    const double L = len(rng);
    std::vector<double> loops(1 + i % 3);
    for (double& l : loops) l = len(rng);
    CHECK(lambda0_flower({L, loops}).lambda0 ==
          doctest::Approx(oracle::flower_lambda0(L, loops)).epsilon(1e-11));
  }
  const double s = std::atan(1.0 / std::sqrt(2.0));
  CHECK(lambda0_flower({1.0, {1.0}}).lambda0 == doctest::Approx(s * s).epsilon(1e-12));
}

TEST_CASE("eigenfunction is positive and normalized") {
  const auto r = lambda0_flower({0.8, {0.75}});
  const auto& mesh = *r.eigenfunction.mesh;
  for (std::size_t n = 0; n < mesh.node_count(); ++n) {
    if (!mesh.is_dirichlet(n)) CHECK(r.eigenfunction.values[static_cast<Eigen::Index>(n)] > 0.0);
  }
  CHECK(r.eigenfunction.l2_norm() == doctest::Approx(1.0).epsilon(1e-3));
  const auto d = lambda0_discretized(to_graph({0.8, {0.75}}), 1e-2);
  CHECK(d.eigenfunction.min() >= 0.0);
}

TEST_CASE("discretized eigenvalue") {
  CHECK(std::abs(lambda0_discretized(to_graph({2.0, {}}), 1e-3).lambda0 - kPi * kPi / 16) <= 1e-4);

  // Richardson extrapolation over three meshes reproduces the secular root.
  const auto g = to_graph({0.8, {0.75}});
  const double l4 = lambda0_discretized(g, 4e-3).lambda0;
  const double l2 = lambda0_discretized(g, 2e-3).lambda0;
  const double l1 = lambda0_discretized(g, 1e-3).lambda0;
  const double exact = lambda0_flower({0.8, {0.75}}).lambda0;
  const double order = std::log2((l4 - l2) / (l2 - l1));
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
  CHECK(l1 + (l1 - l2) / 3.0 == doctest::Approx(exact).epsilon(1e-10));
  CHECK(std::abs(l1 - exact) <= 5 * 1e-6);

  try {
    lambda0_discretized(to_graph({0.03, {}}), 1e-2);
    FAIL("expected MeshTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MeshTooCoarse);
  }
}

TEST_CASE("scaling law") {
  const FlowerSpec base{0.8, {0.75, 0.3}};
  const double ref = lambda0_flower(base).lambda0;
  for (double s : {0.5, 2.0}) {
    FlowerSpec scaled{base.stem_length * s, {0.75 * s, 0.3 * s}};
    CHECK(lambda0_flower(scaled).lambda0 * s * s == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalue slope identity") {
  SUBCASE("interval, Neumann end") {
    const double L = 2.0;
    const auto [lhs, rhs] = eigenvalue_length_slope(to_graph({L, {}}), "stem", 2e-3);
    const double exact = -kPi * kPi / (2 * L * L * L);
    CHECK(lhs == doctest::Approx(exact).epsilon(1e-4));
    CHECK(rhs == doctest::Approx(exact).epsilon(1e-4));
  }
  SUBCASE("tadpole stem") {
    const auto [lhs, rhs] = eigenvalue_length_slope(to_graph({0.8, {0.75}}), "stem", 1e-3);
    CHECK(lhs < 0.0);
    CHECK(std::abs(lhs - rhs) <= 1e-3 * std::abs(lhs));
  }
  SUBCASE("Dirichlet pendant end") {
    // Orient the pendant so that its Dirichlet vertex is the `to` end.
    MetricGraph g({{"p", "center", "root", 0.8}, {"l", "center", "center", 1.5}},
                  {{"root", VertexCondition::Dirichlet}});
    const auto [lhs, rhs] = eigenvalue_length_slope(g, "p", 1e-3);
    CHECK(std::abs(lhs - rhs) <= 1e-3 * std::abs(lhs));
  }
}

TEST_CASE("region membership") {
  CHECK(region_membership({1.0, {}}).region == Region::Trivial);
  CHECK(region_membership({2.0, {}}).region == Region::Nontrivial);
  CHECK(region_membership({0.8, {0.75}}).region == Region::Nontrivial);
  const double L = lower_boundary({0.452});
  CHECK(region_membership({L, {0.452}}).on_boundary);
}

TEST_CASE("lower boundary") {
  CHECK(lower_boundary({0.0, 0.0}) == doctest::Approx(kPi / 2));
  CHECK(lower_boundary_symmetric(0.8, 1) == doctest::Approx(std::atan(1 / std::tan(0.8) / 2)));
  CHECK(lower_boundary_symmetric(0.8, 1) == doctest::Approx(0.452).epsilon(1e-3));
  CHECK(std::abs(lambda0_flower({0.8, {lower_boundary_symmetric(0.8, 1)}}).lambda0 - 1.0) <= 1e-6);
  for (int n : {1, 3}) {
    const double l0 = lower_boundary_symmetric(1.1, n);
    CHECK(lower_boundary(std::vector<double>(n, l0)) == doctest::Approx(1.1).epsilon(1e-12));
  }
  try {
    lower_boundary({1.6});
    FAIL("expected LoopTooLong");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LoopTooLong);
  }
}

TEST_CASE("eigenvalue decreases with every edge length") {
  const FlowerSpec s{0.6, {0.4, 0.9}};
  const double base = lambda0_flower(s).lambda0;
  CHECK(lambda0_flower({0.7, {0.4, 0.9}}).lambda0 < base);
  CHECK(lambda0_flower({0.6, {0.5, 0.9}}).lambda0 < base);
  CHECK(lambda0_flower({0.6, {0.4, 1.0}}).lambda0 < base);
}
