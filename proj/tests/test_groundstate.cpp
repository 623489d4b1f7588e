#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fkpp/error.hpp"
#include "fkpp/evolve.hpp"
#include "fkpp/groundstate.hpp"
#include "fkpp/period.hpp"
#include "fkpp/spectral.hpp"
#include "oracles.hpp"

using namespace fkpp;

namespace {

const double kPi = std::numbers::pi;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ParseError;
}

void check_range(const GroundStateSolution& s) {
  for (const auto& e : s.profiles) {
    for (double u : e.u) {
      CHECK(u >= 0.0);
      CHECK(u <= 1.0);
    }
  }
}

}  // namespace

TEST_CASE("interval ground state") {
  CHECK(code_of([] { solve_interval(1.0); }) == ErrorCode::BelowThreshold);
  CHECK(solve_interval(kPi / 2 + 1e-6).p > 0.99);

  const auto s = solve_interval(10.0);
  CHECK(s.p < 1e-3);
  CHECK(std::abs(asymptotic_T({s.p, 0.0}) - 10.0) <= 10 * s.p);

  const auto two = solve_interval(2.0);
  CHECK(two.p == doctest::Approx(1.0 - oracle::interval_top(2.0)).epsilon(1e-9));
  const auto& stem = two.profiles.at(0);
  CHECK(stem.u.front() == 0.0);
  CHECK(std::abs(stem.du.back()) <= 1e-8);
  CHECK(*std::max_element(stem.u.begin(), stem.u.end()) < 1.0);
  check_range(two);
  CHECK(proximity_check(two) == doctest::Approx(two.p));
}

TEST_CASE("tadpole ground state") {
  const FlowerSpec spec{0.8, {0.75}};
  const auto s = solve_flower(spec);
  CHECK(s.residuals.period <= 1e-11);
  CHECK(s.residuals.kirchhoff_flux <= 1e-8);
  CHECK(s.residuals.continuity <= 1e-9);
  CHECK(s.residuals.dirichlet == 0.0);
  CHECK(s.q_stem == doctest::Approx(2 * s.q_loops[0]));
  check_range(s);

  // Solve, then evaluate through the public (p, q) chart.
  CHECK(std::abs(period_T({s.p, s.q_stem}, 1e-13).value - spec.stem_length) <= 1e-11);
  CHECK(std::abs(period_T0({s.p, s.q_loops[0]}, 1e-13).value - 0.75) <= 1e-11);

  const auto& stem = s.profiles.at(0);
  for (std::size_t k = 1; k < stem.u.size(); ++k) CHECK(stem.u[k] > stem.u[k - 1]);
  const auto& loop = s.profiles.at(1);
  const std::size_t mid = loop.u.size() / 2;
  CHECK(loop.x[mid] == doctest::Approx(0.75));
  CHECK(*std::max_element(loop.u.begin(), loop.u.end()) == loop.u[mid]);
  CHECK(loop.u[mid] > loop.u.front());
  for (std::size_t k = 0; k < loop.u.size(); ++k) {
    CHECK(std::abs(loop.u[k] - loop.u[loop.u.size() - 1 - k]) <= 1e-10);
  }
  CHECK(loop.u.front() == doctest::Approx(stem.u.back()).epsilon(1e-9));
  CHECK(energy_of(s) < 0.0);
}

TEST_CASE("two-loop flower with a stem orbit outside the homoclinic") {
  const auto s = solve_flower({0.51, {0.8, 0.5}});
  CHECK(s.residuals.period <= 1e-9);
  CHECK(s.residuals.kirchhoff_flux <= 1e-9);
  CHECK(s.residuals.continuity <= 1e-9);
  CHECK(energy(s.p, s.q_stem).value > 0.0);
  check_range(s);
}

TEST_CASE("symmetric flowers follow the exponential law") {
  for (double L : {8.0, 10.0}) {
    for (int n : {1, 3}) {
      const auto s = solve_flower({L, std::vector<double>(n, L)});
      const double law = 12.0 / (1 + 2 * n) * std::exp(-L - kHomoclinicShift);
      CHECK(std::abs(s.p / law - 1.0) <= 3 * std::exp(-L));
    }
  }
}

TEST_CASE("outside the region") {
  CHECK(code_of([] { solve_flower({0.5, {0.3}}); }) == ErrorCode::OutsideRegion);
  CHECK(code_of([] { solve_flower({1.0, {}}); }) == ErrorCode::BelowThreshold);
}

TEST_CASE("random specs inside the region converge") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> len(0.05, 3.0);
  int solved = 0;
  for (int i = 0; i < 30; ++i) {
    FlowerSpec spec{len(rng), std::vector<double>(1 + i % 4)};
    for (double& l : spec.loop_half_lengths) l = len(rng);
    if (region_membership(spec).region != Region::Nontrivial) continue;
    const auto s = solve_flower(spec);
    CHECK(s.residuals.period <= 1e-11);
    CHECK(s.residuals.kirchhoff_flux <= 1e-8);
    ++solved;
  }
  CHECK(solved >= 10);
}

TEST_CASE("uniqueness probe") {
  const std::vector<FlowerSpec> specs = {{0.8, {0.75}}, {0.51, {0.8, 0.5}}};
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (const auto& spec : specs) {
    const auto ref = solve_flower(spec);
    int converged = 0;
    for (int i = 0; i < 20; ++i) {
      const double p = u(rng);
      std::vector<double> q(spec.loop_count());
      for (double& v : q) v = -u(rng) * std::sqrt(potential(p));
      try {
        const auto s = solve_flower_from(spec, p, q, {.profile_dx = 0.0});
        ++converged;
        CHECK(std::abs(s.p - ref.p) <= 1e-8);
        for (std::size_t j = 0; j < q.size(); ++j) {
          CHECK(std::abs(s.q_loops[j] - ref.q_loops[j]) <= 1e-8);
        }
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NewtonStalled);
      }
    }
    CHECK(converged > 0);
  }
}

TEST_CASE("approach to the lower boundary") {
  const std::vector<double> loops{0.452};
  const double crit = lower_boundary(loops);
  double prev_gap = 1.0, prev_q = 1.0;
  for (double d : {1e-1, 1e-2, 1e-3}) {
    const auto s = solve_flower({crit + d, loops});
    CHECK(1.0 - s.p < prev_gap);
    CHECK(std::abs(s.q_loops[0]) < prev_q);
    prev_gap = 1.0 - s.p;
    prev_q = std::abs(s.q_loops[0]);
  }
  // The branch leaves the trivial state transversally: 1 - p is linear in d.
  const auto s2 = solve_flower({crit + 1e-2, loops});
  const auto s3 = solve_flower({crit + 1e-3, loops});
  CHECK((1.0 - s2.p) / (1.0 - s3.p) == doctest::Approx(10.0).epsilon(0.05));
  CHECK(proximity_check(s3) > 0.998);
}

TEST_CASE("jacobian report") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int n = 1; n <= 5; ++n) {
    for (int i = 0; i < 20; ++i) {
      const double p = u(rng);
      std::vector<double> q(n);
      for (double& v : q) v = -u(rng) * std::sqrt(potential(p));
      const auto r = jacobian_report(p, q);
      CHECK(r.expected_sign == (n % 2 ? 1 : -1));
      CHECK(r.determinant * r.expected_sign > 0.0);
      CHECK(r.determinant == doctest::Approx(r.expanded_determinant).epsilon(1e-8));
    }
  }
  // Finite-difference columns for one N = 2 point.
  const double p = 0.4;
  std::vector<double> q{-0.1, -0.2};
  const auto r = jacobian_report(p, q);
  auto F = [](double pp, std::vector<double> qq) {
    return std::vector<double>{period_T({pp, 2 * (qq[0] + qq[1])}, 1e-13).value,
                               period_T0({pp, qq[0]}, 1e-13).value,
                               period_T0({pp, qq[1]}, 1e-13).value};
  };
  const double h = 1e-6;
  for (int c = 0; c < 3; ++c) {
    double pp = p, pm = p;
    auto qp = q, qm = q;
    if (c == 0) { pp += h; pm -= h; } else { qp[c - 1] += h; qm[c - 1] -= h; }
    const auto fp = F(pp, qp), fm = F(pm, qm);
    for (int row = 0; row < 3; ++row) {
      const double fd = (fp[row] - fm[row]) / (2 * h);
      CHECK(std::abs(fd - r.matrix(row, c)) <= 1e-4 * std::max(std::abs(r.matrix(row, c)), 1e-6));
    }
  }
}

TEST_CASE("profile reconstruction") {
  auto s = solve_flower({0.8, {0.75}}, {.profile_dx = 0.0});
  CHECK(s.profiles.empty());
  reconstruct_profile(s, 1e-3, 1e-11);
  REQUIRE(s.profiles.size() == 2);
  CHECK(s.profiles[0].x.back() == 0.8);
  CHECK(s.profiles[1].x.back() == 1.5);
  // A perturbed parameter no longer closes the orbit.
  auto bad = s;
  bad.p += 1e-6;
  CHECK(code_of([&] { reconstruct_profile(bad, 1e-3, 1e-11); }) == ErrorCode::StepTooLarge);
  // Hermite interpolation reproduces samples and the ODE flow between them.
  CHECK(profile_value(s, "stem", s.profiles[0].x[100]) == doctest::Approx(s.profiles[0].u[100]));
  auto fine = s;
  reconstruct_profile(fine, 1e-4, 1e-11);
  CHECK(profile_value(s, "stem", 0.40005) == doctest::Approx(profile_value(fine, "stem", 0.40005)).epsilon(1e-10));
}

TEST_CASE("energy") {
  GroundStateSolution zero;
  zero.spec = {1.0, {}};
  zero.profiles.push_back({"stem", {0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}});
  CHECK(energy_of(zero) == 0.0);

  auto s = solve_flower({0.8, {0.75}}, {.profile_dx = 0.0});
  reconstruct_profile(s, 2e-4, 1e-11);
  const double ref = energy_of(s);
  CHECK(ref < 0.0);
  // Trapezoid rule: second order in general. Steps that divide every edge
  // length cancel the leading term through the Kirchhoff condition.
  for (double dx : {4e-2, 2e-2, 8e-3, 3e-3}) {
    reconstruct_profile(s, dx, 1e-6);
    CHECK(std::abs(energy_of(s) - ref) <= 1e-3 * dx * dx);
  }
  reconstruct_profile(s, 1e-2, 1e-11);
  CHECK(std::abs(energy_of(s) - ref) <= 1e-10);
  // Independent check against the lumped P1 energy of the interpolated profile.
  auto mesh = std::make_shared<const Discretization>(to_graph(s.spec), 1e-3);
  CHECK(energy_trace(field_from_profile(mesh, s)) == doctest::Approx(ref).epsilon(1e-4));
}

TEST_CASE("proximity decays exponentially") {
  std::vector<double> v;
  for (double L : {6.0, 8.0, 10.0}) v.push_back(proximity_check(solve_flower({L, {L}})));
  CHECK(v[0] / v[1] >= std::exp(2.0) / 2);
  CHECK(v[1] / v[2] >= std::exp(2.0) / 2);
}

TEST_CASE("proximity constant pinned at L = 6 bounds L = 8") {
  const double v6 = proximity_check(solve_flower({6.0, {6.0}}));
  const double v8 = proximity_check(solve_flower({8.0, {8.0}}));
  const double C = v6 * std::exp(6.0);
  CHECK(v8 <= C * std::exp(-8.0));
}
