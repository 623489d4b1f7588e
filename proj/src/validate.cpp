#include "fkpp/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "fkpp/error.hpp"
#include "fkpp/evolve.hpp"
#include "fkpp/groundstate.hpp"
#include "fkpp/kernels.hpp"
#include "fkpp/period.hpp"
#include "fkpp/spectral.hpp"

namespace fkpp {

namespace {

constexpr double kQuad = 1e-12;

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  return v;
}

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// --- asymptotics -----------------------------------------------------------

SuiteReport asymptotics() {
  SuiteReport r{"asymptotics", {}};

  {
    std::vector<double> ratio;
    for (double p : {1e-2, 1e-3, 1e-4}) {
      const double t = period_T({p, -p}, 1e-13).value;
      ratio.push_back(std::abs(t - asymptotic_T({p, -p})) / p);
    }
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    r.checks.push_back({"homoclinic_remainder_linear", *hi <= 3.0 * *lo,
                        fmt("|T - law| / p = %.4g, %.4g, %.4g", ratio[0], ratio[1], ratio[2])});
  }
  {
    bool ok = true;
    std::string detail;
    for (double L : {6.0, 8.0, 10.0}) {
      const double p = 6.0 * std::exp(-L - kHomoclinicShift);
      const double q = -std::sqrt(potential(p));
      const double err = std::abs(period_T({p, q}, 1e-13).value - L);
      ok = ok && err <= 10.0 * std::exp(-L);
      detail += fmt("L=%g: %.3g ", L, err);
    }
    r.checks.push_back({"homoclinic_trace", ok, detail});
  }
  {
    bool ok = true;
    std::string detail;
    const double p = 1.0 - 1e-3;
    for (double Q : {-0.5, -1.0, -2.0}) {
      const auto [t_lim, t0_lim] = center_limits(Q);
      const double q = Q * (1.0 - p);
      const double t = period_T({p, q}, kQuad).value;
      const double t0 = period_T0({p, q}, kQuad).value;
      ok = ok && std::abs(t - t_lim) <= 5e-3 && std::abs(t0 - t0_lim) <= 5e-3 &&
           std::abs(t + t0 - 0.5 * std::numbers::pi) <= 5e-3;
      detail += fmt("Q=%g: %.2e %.2e ", Q, t - t_lim, t0 - t0_lim);
    }
    r.checks.push_back({"center_limits", ok, detail});
  }
  {
    const double p = 1e-3;
    const double v = p * grad_T({p, -p}, kQuad).dp;
    r.checks.push_back({"slope_limit", std::abs(v + 0.5) <= 1e-2, fmt("p dT/dp = %.6f", v)});
  }
  {
    const double t = period_T({1.0 - 1e-4, 0.0}, kQuad).value;
    r.checks.push_back({"interval_center_limit", std::abs(t - 0.5 * std::numbers::pi) <= 5e-3,
                        fmt("T(1-1e-4, 0) = %.8f", t)});
  }
  {
    const double L = 10.0;
    const auto sol = solve_interval(L, {.profile_dx = 0.0});
    const double law = 12.0 * std::exp(-L - kHomoclinicShift);
    const double dev = std::abs(std::log(sol.p / law));
    r.checks.push_back({"interval_large_length", dev <= 10.0 * sol.p,
                        fmt("p = %.6e, law %.6e", sol.p, law)});
  }
  return r;
}

// --- monotonicity ----------------------------------------------------------

SuiteReport monotonicity() {
  SuiteReport r{"monotonicity", {}};
  const auto ps = log_grid(0.02, 0.98, 20);
  std::vector<double> qs = log_grid(0.005, 3.0, 20);
  for (double& q : qs) q = -q;
  const double h = 1e-4;

  int t_sign = 0, t_diff = 0, t_fd = 0, identity = 0;
  double worst_identity = 0.0, worst_fd = 0.0;
  int t0_points = 0, t0_q = 0, t0_p = 0, t0_diff = 0, t0_fd = 0;
  for (double p : ps) {
    for (double q : qs) {
      const auto g = grad_T({p, q}, kQuad);
      if (!(g.dp < 0.0 && g.dq > 0.0)) ++t_sign;
      const double t = period_T({p, q}, kQuad).value;
      if (!(period_T({p + h, q}, kQuad).value < t && period_T({p, q + h}, kQuad).value > t)) ++t_diff;
      const double e = 1e-5;
      const double fdp = (period_T({p + e, q}, kQuad).value - period_T({p - e, q}, kQuad).value) / (2 * e);
      const double fdq = (period_T({p, q + e}, kQuad).value - period_T({p, q - e}, kQuad).value) / (2 * e);
      const double dev = std::max(std::abs(fdp - g.dp) / std::abs(g.dp), std::abs(fdq - g.dq) / std::abs(g.dq));
      worst_fd = std::max(worst_fd, dev);
      if (dev > 1e-4) ++t_fd;
      const double id = std::abs(q * g.dp + p * (1.0 - p) * g.dq - 1.0);
      worst_identity = std::max(worst_identity, id);
      if (id > 1e-6) ++identity;

      // T0 on the closed-orbit part of the grid, with room for the probes.
      if (!(q * q + 2 * e < potential(p - 2 * e) && q + h < 0.0)) continue;
      ++t0_points;
      const auto g0 = grad_T0({p, q}, kQuad);
      if (!(g0.dq < 0.0)) ++t0_q;
      const double t0 = period_T0({p, q}, kQuad).value;
      if (!(period_T0({p, q + h}, kQuad).value < t0)) ++t0_diff;
      if (p <= 0.5) {
        if (!(g0.dp < 0.0)) ++t0_p;
        if (!(period_T0({p + h, q}, kQuad).value < t0)) ++t0_diff;
      }
      const double fd0p = (period_T0({p + e, q}, kQuad).value - period_T0({p - e, q}, kQuad).value) / (2 * e);
      const double fd0q = (period_T0({p, q + e}, kQuad).value - period_T0({p, q - e}, kQuad).value) / (2 * e);
      const double dev0 = std::max(std::abs(fd0p - g0.dp) / std::abs(g0.dp), std::abs(fd0q - g0.dq) / std::abs(g0.dq));
      worst_fd = std::max(worst_fd, dev0);
      if (dev0 > 1e-4) ++t0_fd;
    }
  }
  r.checks.push_back({"T_gradient_signs", t_sign == 0, fmt("%d violations of 400", t_sign)});
  r.checks.push_back({"T_difference_signs", t_diff == 0, fmt("%d violations of 400", t_diff)});
  r.checks.push_back({"T0_dq_negative", t0_q == 0, fmt("%d violations of %d", t0_q, t0_points)});
  r.checks.push_back({"T0_dp_negative_below_half", t0_p == 0, fmt("%d violations", t0_p)});
  r.checks.push_back({"T0_difference_signs", t0_diff == 0, fmt("%d violations", t0_diff)});
  r.checks.push_back({"gradient_vs_finite_difference", t_fd + t0_fd == 0,
                      fmt("%d violations, worst relative %.2e", t_fd + t0_fd, worst_fd)});
  r.checks.push_back({"transport_identity", identity == 0,
                      fmt("worst |q T_p + p(1-p) T_q - 1| = %.2e", worst_identity)});

  // lambda0 decreases when any single edge grows.
  int lam_bad = 0;
  const std::vector<FlowerSpec> specs = {{0.8, {0.75}}, {0.51, {0.8, 0.5}}, {1.2, {0.3, 0.4, 0.2}}, {2.0, {}}};
  for (const auto& s : specs) {
    const double base = lambda0_flower(s).lambda0;
    FlowerSpec longer = s;
    longer.stem_length += 0.1;
    if (!(lambda0_flower(longer).lambda0 < base)) ++lam_bad;
    for (std::size_t j = 0; j < s.loop_count(); ++j) {
      longer = s;
      longer.loop_half_lengths[j] += 0.1;
      if (!(lambda0_flower(longer).lambda0 < base)) ++lam_bad;
    }
  }
  r.checks.push_back({"lambda0_decreasing_in_lengths", lam_bad == 0, fmt("%d violations", lam_bad)});
  return r;
}

// --- jacobian --------------------------------------------------------------

SuiteReport jacobian(std::uint64_t seed) {
  SuiteReport r{"jacobian", {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  int fd_bad = 0, fd_checked = 0;
  for (int n = 1; n <= 5; ++n) {
    int wrong = 0, mismatch = 0;
    for (int s = 0; s < 100; ++s) {
      const double p = unit(rng);
      std::vector<double> q(n);
      for (double& v : q) v = -unit(rng) * std::sqrt(potential(p));
      const auto rep = jacobian_report(p, q);
      if (!(rep.determinant * rep.expected_sign > 0.0)) ++wrong;
      if (!close_rel(rep.determinant, rep.expanded_determinant, 1e-8)) ++mismatch;
      if (s < 5) {
        // Central differences of (T(p, 2 sum q), T0(p, q_j)).
        auto F = [&](double pp, const std::vector<double>& qq) {
          std::vector<double> out;
          double qs = 0.0;
          for (double v : qq) qs += 2.0 * v;
          out.push_back(period_T({pp, qs}, 1e-13).value);
          for (double v : qq) out.push_back(period_T0({pp, v}, 1e-13).value);
          return out;
        };
        for (int c = 0; c <= n; ++c) {
          const double e = 1e-6;
          double pp = p, pm = p;
          auto qp = q, qm = q;
          if (c == 0) { pp += e; pm -= e; } else { qp[c - 1] += e; qm[c - 1] -= e; }
          const auto fp = F(pp, qp);
          const auto fm = F(pm, qm);
          for (int row = 0; row <= n; ++row) {
            const double fd = (fp[row] - fm[row]) / (2 * e);
            const double an = rep.matrix(row, c);
            ++fd_checked;
            if (std::abs(fd - an) > 1e-4 * std::max(std::abs(an), 1e-6)) ++fd_bad;
          }
        }
      }
    }
    r.checks.push_back({fmt("sign_N%d", n), wrong == 0,
                        fmt("%d of 100 samples with sign != (-1)^(N+1)", wrong)});
    r.checks.push_back({fmt("expansion_N%d", n), mismatch == 0,
                        fmt("%d LU/expansion disagreements", mismatch)});
  }
  r.checks.push_back({"finite_difference_entries", fd_bad == 0,
                      fmt("%d of %d entries off by more than 1e-4 relative", fd_bad, fd_checked)});
  return r;
}

// --- dichotomy -------------------------------------------------------------

SuiteReport dichotomy(int jobs) {
  SuiteReport r{"dichotomy", {}};
  const std::vector<std::vector<double>> loops = {
      {}, {0.45}, {1.0}, {0.3, 0.6}, {0.2, 0.3, 0.5}, {0.1, 0.1, 0.1, 0.1}};
  std::vector<FlowerSpec> specs;
  for (const auto& l : loops) {
    const double crit = l.empty() ? 0.5 * std::numbers::pi : lower_boundary(l);
    for (double f : {0.8, 1.25}) specs.push_back({f * crit, l});
  }
  std::vector<PropertyCheck> out(specs.size());
  kernels::parallel_for(static_cast<long>(specs.size()), jobs, [&](long i) {
    const auto& s = specs[static_cast<std::size_t>(i)];
    const auto verdict = region_membership(s);
    double shortest = s.stem_length;
    for (double l : s.loop_half_lengths) shortest = std::min(shortest, 2.0 * l);
    auto mesh = std::make_shared<const Discretization>(to_graph(s), std::min(1e-2, shortest / 8.0));
    const auto tr = run_to_attractor(hat_field(mesh, 0.5),
                                     {.dt = 0.1, .max_t = 5e3, .tol = 1e-9, .parallel = false});
    const bool expect_nontrivial = verdict.region == Region::Nontrivial;
    const bool ok = expect_nontrivial ? tr.terminal == Terminal::ConvergedNontrivial
                                      : tr.terminal == Terminal::ConvergedTrivial;
    std::string loops_str;
    for (double l : s.loop_half_lengths) loops_str += fmt("%.3g ", l);
    out[static_cast<std::size_t>(i)] = {
        fmt("spec_%ld", i), ok,
        fmt("L=%.4f loops=[ %s] lambda0=%.4f -> %s at t=%g", s.stem_length, loops_str.c_str(),
            verdict.lambda0, to_string(tr.terminal).c_str(), tr.times.back())};
  });
  r.checks = std::move(out);
  return r;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"asymptotics", "monotonicity", "jacobian",
                                                 "dichotomy"};
  return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, int jobs) {
  if (name == "asymptotics") return asymptotics();
  if (name == "monotonicity") return monotonicity();
  if (name == "jacobian") return jacobian(seed);
  if (name == "dichotomy") return dichotomy(jobs);
  throw Error(ErrorCode::ParseError, "unknown suite '" + name + "'");
}

}  // namespace fkpp
