#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fkpp/error.hpp"
#include "fkpp/period.hpp"
#include "oracles.hpp"

using namespace fkpp;

namespace {
constexpr double kTol = 1e-12;
const double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("T on the q = 0 axis") {
  CHECK(std::abs(period_T({1.0 - 1e-4, 0.0}).value - kPi / 2) <= 5e-3);

  // L* pinned by the raw-integrand oracle before comparing.
  const double l_star = oracle::T(0.5, 0.0);
  CHECK(l_star > kPi / 2);
  CHECK(period_T({0.5, 0.0}, kTol).value == doctest::Approx(l_star).epsilon(1e-11));
  CHECK(period_T({0.6, 0.0}, kTol).value < l_star);
  CHECK(period_T({0.4, 0.0}, kTol).value > l_star);
}

TEST_CASE("T against the raw-integrand oracle") {
  for (double p : {0.05, 0.3, 0.7, 0.95}) {
    for (double q : {-0.01, -0.4, -2.0}) {
      CHECK(period_T({p, q}, kTol).value == doctest::Approx(oracle::T(p, q)).epsilon(1e-10));
    }
  }
}

TEST_CASE("T0 against oracles") {
  CHECK(period_T0({0.6, 0.0}).value == 0.0);
  const double p = 0.9, q = -0.05;
  const double shoot = oracle::shoot_to(oracle::turning_point(p, q), 0.0, p);
  CHECK(std::abs(period_T0({p, q}, kTol).value - shoot) <= 1e-8);
  for (double pp : {0.2, 0.45, 0.8}) {
    const double qq = -0.5 * std::sqrt(potential(pp));
    CHECK(period_T0({pp, qq}, kTol).value == doctest::Approx(oracle::T0(pp, qq)).epsilon(1e-10));
  }
  // Turning-point chart agrees with the (p, q) chart.
  const double p0 = turning_point_p0({0.45, -0.03});
  CHECK(period_T0_turning(0.45, p0, kTol).value ==
        doctest::Approx(period_T0({0.45, -0.03}, kTol).value).epsilon(1e-11));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(period_T({0.0, -0.1}), Error);
  CHECK_THROWS_AS(period_T({0.5, 0.1}), Error);
  try {
    period_T0({0.5, -1.0});
    FAIL("expected OrbitNotClosed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrbitNotClosed);
  }
  CHECK_THROWS_AS(grad_T({0.5, 0.0}), Error);
}

TEST_CASE("center limits") {
  const auto [t, t0] = center_limits(-1.0);
  CHECK(t == doctest::Approx(kPi / 4));
  CHECK(t0 == doctest::Approx(kPi / 4));
  const auto [tn, t0n] = center_limits(-1e-9);
  CHECK(tn == doctest::Approx(kPi / 2));
  CHECK(t0n == doctest::Approx(0.0).epsilon(1e-8));
  const double p = 1.0 - 1e-3;
  for (double Q : {-0.5, -1.0, -2.0}) {
    const auto [lt, lt0] = center_limits(Q);
    const double vt = period_T({p, Q * (1 - p)}, kTol).value;
    const double vt0 = period_T0({p, Q * (1 - p)}, kTol).value;
    CHECK(std::abs(vt - lt) <= 5e-3);
    CHECK(std::abs(vt0 - lt0) <= 5e-3);
    CHECK(std::abs(vt + vt0 - kPi / 2) <= 5e-3);
  }
  CHECK(center_limits(-2.0).first == doctest::Approx(std::asin(1 / std::sqrt(5.0))));
}

TEST_CASE("large-period law") {
  CHECK(std::abs(period_T({1e-3, -1e-3}, kTol).value - asymptotic_T({1e-3, -1e-3})) <= 2e-2);
  const double zero_sum = 12.0 * std::exp(-kHomoclinicShift);
  CHECK(asymptotic_T({zero_sum / 2, -zero_sum / 2}) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(asymptotic_T({1e-4, -1e-4}) ==
        doctest::Approx(std::log(12.0 / 2e-4) - kHomoclinicShift).epsilon(1e-14));
  for (double L : {6.0, 8.0, 10.0}) {
    const double pL = 6.0 * std::exp(-L - kHomoclinicShift);
    CHECK(std::abs(period_T({pL, -std::sqrt(potential(pL))}, 1e-13).value - L) <= 10 * std::exp(-L));
  }
}

TEST_CASE("analytic gradients against finite differences") {
  for (double p : {0.1, 0.3, 0.6, 0.9}) {
    for (double q : {-0.02, -0.3, -1.5}) {
      const auto g = grad_T({p, q}, kTol);
      CHECK(g.dp < 0.0);
      CHECK(g.dq > 0.0);
      const double h = 1e-5;
      const double fdp = (period_T({p + h, q}, kTol).value - period_T({p - h, q}, kTol).value) / (2 * h);
      const double fdq = (period_T({p, q + h}, kTol).value - period_T({p, q - h}, kTol).value) / (2 * h);
      CHECK(std::abs(fdp - g.dp) <= 1e-5 * std::abs(g.dp));
      CHECK(std::abs(fdq - g.dq) <= 1e-5 * std::abs(g.dq));
      CHECK(q * g.dp + p * (1 - p) * g.dq == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  const double p = 0.45, q = -0.03, h = 1e-6;
  const auto g0 = grad_T0({p, q}, kTol);
  CHECK(g0.dq < 0.0);
  CHECK(g0.dp < 0.0);
  const double fdp = (period_T0({p + h, q}, kTol).value - period_T0({p - h, q}, kTol).value) / (2 * h);
  const double fdq = (period_T0({p, q + h}, kTol).value - period_T0({p, q - h}, kTol).value) / (2 * h);
  CHECK(std::abs(fdp - g0.dp) <= 1e-4 * std::abs(g0.dp));
  CHECK(std::abs(fdq - g0.dq) <= 1e-4 * std::abs(g0.dq));
}

TEST_CASE("turning-point chart gradient") {
  const double p = 0.45, p0 = turning_point_p0({0.45, -0.03});
  const auto g = grad_T0_turning(p, p0, kTol);
  const double h = 1e-7;
  const double fdp = (period_T0_turning(p + h, p0, kTol).value - period_T0_turning(p - h, p0, kTol).value) / (2 * h);
  const double fd0 = (period_T0_turning(p, p0 + h, kTol).value - period_T0_turning(p, p0 - h, kTol).value) / (2 * h);
  CHECK(g.dp == doctest::Approx(fdp).epsilon(1e-5));
  CHECK(g.dq == doctest::Approx(fd0).epsilon(1e-5));
}

TEST_CASE("slope limit near the homoclinic corner") {
  const double p = 1e-3;
  CHECK(std::abs(p * grad_T({p, -p}, kTol).dp + 0.5) <= 1e-2);
}
