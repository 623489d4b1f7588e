#include "doctest.h"

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fkpp/discretization.hpp"
#include "fkpp/kernels.hpp"

using namespace fkpp;
using namespace fkpp::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("parallel kernels match the serial reference") {
  const Discretization mesh(to_graph({0.8, {0.75, 0.3}}), 1e-3);
  const auto n = mesh.node_count();
  const auto u = random_vec(n, 1);
  const auto w = random_vec(n, 2);
  std::span<const double> m(mesh.mass().data(), n);

  std::vector<double> a(n), b(n);
  explicit_reaction(u, m, 0.1, a);
  explicit_reaction_serial(u, m, 0.1, b);
  CHECK(a == b);

  CHECK(max_abs_diff(u, w) == max_abs_diff_serial(u, w));

  matvec(mesh.stiffness(), u, a);
  matvec_serial(mesh.stiffness(), u, b);
  CHECK(a == b);

  CHECK(free_energy(mesh.stiffness(), m, u) ==
        doctest::Approx(free_energy_serial(mesh.stiffness(), m, u)).epsilon(1e-13));
}

TEST_CASE("stiffness annihilates constants away from Dirichlet rows") {
  const Discretization mesh(to_graph({1.0, {0.5}}), 1e-2);
  std::vector<double> one(mesh.node_count(), 1.0), out(mesh.node_count());
  matvec(mesh.stiffness(), one, out);
  for (double v : out) CHECK(std::abs(v) < 1e-9);
  CHECK(free_energy(mesh.stiffness(), std::span<const double>(mesh.mass().data(), one.size()),
                    std::vector<double>(one.size(), 0.0)) == 0.0);
}

TEST_CASE("parallel_for") {
  std::atomic<long> sum = 0;
  parallel_for(1000, 4, [&](long i) { sum += i; });
  CHECK(sum == 999 * 1000 / 2);
  CHECK_THROWS_AS(parallel_for(100, 4, [](long i) {
                    if (i == 37) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}
