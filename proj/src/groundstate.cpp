#include "fkpp/groundstate.hpp"

#include <algorithm>
#include <array>
#include <utility>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/LU>

#include "fkpp/error.hpp"
#include "fkpp/period.hpp"
#include "fkpp/roots.hpp"
#include "fkpp/spectral.hpp"

namespace fkpp {

namespace {

// Newton works in x = ln p, y_j = ln(p0_j / p). Admissible iterates have
// x < 0 and y_j < 0; the floor keeps p0 representable.
constexpr double kLogFloor = -700.0;

struct System {
  Eigen::VectorXd F;
  Eigen::MatrixXd J;
};

struct Point {
  double p;
  std::vector<double> p0;
  std::vector<double> q;
  double q_stem;
};

bool admissible(const Eigen::VectorXd& z) {
  if (!std::isfinite(z[0]) || !(z[0] < 0.0) || z[0] <= kLogFloor) return false;
  for (Eigen::Index j = 1; j < z.size(); ++j) {
    if (!std::isfinite(z[j]) || !(z[j] < 0.0) || z[0] + z[j] <= kLogFloor) return false;
  }
  return true;
}

Point decode(const Eigen::VectorXd& z) {
  Point pt;
  pt.p = std::exp(z[0]);
  pt.q_stem = 0.0;
  for (Eigen::Index j = 1; j < z.size(); ++j) {
    const double p0 = pt.p * std::exp(z[j]);
    const double q = orbit_slope(pt.p, p0);
    pt.p0.push_back(p0);
    pt.q.push_back(q);
    pt.q_stem += 2.0 * q;
  }
  return pt;
}

// F and, when asked, dF/dz. Returns nullopt where the period functions are
// undefined (iterate left the admissible set through rounding).
std::optional<System> evaluate(const FlowerSpec& spec, const Eigen::VectorXd& z, bool jacobian,
                               double quad_tol) {
  if (!admissible(z)) return std::nullopt;
  const std::size_t n = spec.loop_count();
  const Point pt = decode(z);
  if (!(pt.q_stem < 0.0)) return std::nullopt;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(pt.p0[j] < pt.p) || !(pt.q[j] < 0.0)) return std::nullopt;
  }
  System s;
  s.F.resize(n + 1);
  try {
    s.F[0] = period_T({pt.p, pt.q_stem}, quad_tol).value - spec.stem_length;
    for (std::size_t j = 0; j < n; ++j) {
      s.F[j + 1] = period_T0_turning(pt.p, pt.p0[j], quad_tol).value - spec.loop_half_lengths[j];
    }
    if (!jacobian) return s;
    s.J = Eigen::MatrixXd::Zero(n + 1, n + 1);
    const auto gT = grad_T({pt.p, pt.q_stem}, quad_tol);
    const double p = pt.p;
    double dqs_dx = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p0 = pt.p0[j];
      const double qj = pt.q[j];
      // q_j = -sqrt(A(p) - A(p0)); x moves p and p0 together, y_j moves p0.
      const double dq_dx = (p * potential_slope(p) - p0 * potential_slope(p0)) / (2.0 * qj);
      const double dq_dy = -p0 * potential_slope(p0) / (2.0 * qj);
      dqs_dx += 2.0 * dq_dx;
      s.J(0, j + 1) = gT.dq * 2.0 * dq_dy;
      const auto g0 = grad_T0_turning(p, p0, quad_tol);
      s.J(j + 1, 0) = p * g0.dp + p0 * g0.dq;
      s.J(j + 1, j + 1) = p0 * g0.dq;
    }
    s.J(0, 0) = p * gT.dp + gT.dq * dqs_dx;
  } catch (const Error&) {
    return std::nullopt;
  }
  if (!s.F.allFinite() || (jacobian && !s.J.allFinite())) return std::nullopt;
  return s;
}

struct NewtonOutcome {
  bool converged = false;
  Eigen::VectorXd z;
  double fnorm = 0.0;
  int iterations = 0;
};

NewtonOutcome newton(const FlowerSpec& spec, Eigen::VectorXd z, const GroundStateOptions& opt,
                     double quad_tol) {
  NewtonOutcome out;
  out.z = z;
  auto sys = evaluate(spec, z, true, quad_tol);
  if (!sys) return out;
  double fnorm = sys->F.lpNorm<Eigen::Infinity>();
  out.fnorm = fnorm;
  for (int it = 0; it < opt.max_iterations; ++it) {
    out.iterations = it;
    if (fnorm <= opt.tol) {
      out.converged = true;
      return out;
    }
    const Eigen::VectorXd step = sys->J.fullPivLu().solve(-sys->F);
    if (!step.allFinite()) return out;
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 50; ++halving, alpha *= 0.5) {
      const Eigen::VectorXd trial = z + alpha * step;
      auto trial_sys = evaluate(spec, trial, false, quad_tol);
      if (!trial_sys) continue;
      const double trial_norm = trial_sys->F.lpNorm<Eigen::Infinity>();
      if (trial_norm < fnorm) {
        z = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) return out;
    sys = evaluate(spec, z, true, quad_tol);
    if (!sys) return out;
    fnorm = sys->F.lpNorm<Eigen::Infinity>();
    out.z = z;
    out.fnorm = fnorm;
  }
  out.iterations = opt.max_iterations;
  out.converged = fnorm <= opt.tol;
  return out;
}

// y = ln(p0 / p) with T0(p, p0) = L_j at fixed p; T0 decreases in y.
std::optional<double> loop_presolve(double p, double Lj, double quad_tol) {
  auto f = [&](double y) { return period_T0_turning(p, p * std::exp(y), quad_tol).value - Lj; };
  double lo = -1.0;
  while (f(lo) <= 0.0) {
    lo *= 2.0;
    if (std::log(p) + lo <= kLogFloor) return std::nullopt;
  }
  auto fdf = [&](double y) {
    const double p0 = p * std::exp(y);
    const double val = period_T0_turning(p, p0, quad_tol).value - Lj;
    return std::pair<double, double>{val, p0 * grad_T0_turning(p, p0, quad_tol).dq};
  };
  return bracketed_newton(fdf, lo, 0.0, false, 0.01 * quad_tol).x;
}

std::optional<Eigen::VectorXd> asymptotic_start(const FlowerSpec& spec, double quad_tol) {
  const double n = static_cast<double>(spec.loop_count());
  const double p = std::clamp(12.0 / (1.0 + 2.0 * n) *
                                  std::exp(-spec.stem_length - kHomoclinicShift),
                              1e-8, 0.9);
  Eigen::VectorXd z(spec.loop_count() + 1);
  z[0] = std::log(p);
  for (std::size_t j = 0; j < spec.loop_count(); ++j) {
    const auto y = loop_presolve(p, spec.loop_half_lengths[j], quad_tol);
    if (!y) return std::nullopt;
    z[j + 1] = *y;
  }
  return z;
}

// Scalar reduction: for each p the loop equations fix every y_j, leaving
// G(x) = T(p, 2 sum q_j) - L, which decreases from +inf (p -> 0) to a
// negative value (p -> 1) whenever the spec lies in the nontrivial region.
std::optional<Eigen::VectorXd> reduced_bisection(const FlowerSpec& spec, double quad_tol) {
  const std::size_t n = spec.loop_count();
  Eigen::VectorXd z(n + 1);
  auto G = [&](double x) -> std::optional<double> {
    const double p = std::exp(x);
    z[0] = x;
    double qs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto y = loop_presolve(p, spec.loop_half_lengths[j], quad_tol);
      if (!y) return std::nullopt;
      z[j + 1] = *y;
      qs += 2.0 * orbit_slope(p, p * std::exp(*y));
    }
    if (!(qs < 0.0)) return std::nullopt;
    return period_T({p, qs}, quad_tol).value - spec.stem_length;
  };
  double hi = std::log1p(-1e-12);
  auto ghi = G(hi);
  if (!ghi || *ghi >= 0.0) return std::nullopt;
  double lo = std::log(12.0) - spec.stem_length - kHomoclinicShift - 1.0;
  for (;;) {
    auto glo = G(lo);
    if (!glo) return std::nullopt;
    if (*glo > 0.0) break;
    hi = lo;
    lo -= 4.0;
    if (lo <= kLogFloor) return std::nullopt;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    auto g = G(mid);
    if (!g) return std::nullopt;
    if (*g > 0.0) lo = mid; else hi = mid;
  }
  if (!G(0.5 * (lo + hi))) return std::nullopt;
  return z;
}

FlowerSpec inflated(const FlowerSpec& spec, double d) {
  FlowerSpec s = spec;
  s.stem_length += d;
  for (double& l : s.loop_half_lengths) l += d;
  return s;
}

void finish(GroundStateSolution& sol, const GroundStateOptions& opt) {
  if (opt.profile_dx <= 0.0) return;
  double dx = opt.profile_dx;
  for (int attempt = 0;; ++attempt) {
    try {
      reconstruct_profile(sol, dx, opt.tol);
      return;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StepTooLarge || attempt >= 3) throw;
      dx *= 0.5;
    }
  }
}

GroundStateSolution package(const FlowerSpec& spec, const NewtonOutcome& nw,
                            const std::string& how) {
  GroundStateSolution sol;
  sol.spec = spec;
  const Point pt = decode(nw.z);
  sol.p = pt.p;
  sol.q_loops = pt.q;
  sol.q_stem = pt.q_stem;
  sol.turning_points = pt.p0;
  sol.newton_iterations = nw.iterations;
  sol.residuals.period = nw.fnorm;
  sol.initialization = how;
  return sol;
}

double quad_tolerance(const GroundStateOptions& opt) {
  return std::min(opt.quad_tol, 0.01 * opt.tol);
}

// RK4 for (u~, u~') of u~'' = u~ - u~^2 over n steps of h; states[k] at k h.
std::vector<std::array<double, 2>> integrate_orbit(double u0, double v0, double h, int n) {
  auto rhs = [](const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], y[0] - y[0] * y[0]};
  };
  std::vector<std::array<double, 2>> out(static_cast<std::size_t>(n) + 1);
  std::array<double, 2> y{u0, v0};
  out[0] = y;
  for (int k = 0; k < n; ++k) {
    const auto k1 = rhs(y);
    const auto k2 = rhs({y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const auto k3 = rhs({y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const auto k4 = rhs({y[0] + h * k3[0], y[1] + h * k3[1]});
    for (int i = 0; i < 2; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    out[static_cast<std::size_t>(k) + 1] = y;
  }
  return out;
}

const EdgeProfile& find_profile(const GroundStateSolution& s, const std::string& id) {
  for (const auto& e : s.profiles) {
    if (e.edge_id == id) return e;
  }
  throw Error(ErrorCode::InvalidDomain, "no profile for edge " + id);
}

}  // namespace

GroundStateSolution solve_interval(double L, const GroundStateOptions& opt) {
  if (!(L > 0.5 * std::numbers::pi)) {
    throw Error(ErrorCode::BelowThreshold, "interval length must exceed pi/2");
  }
  const double qt = quad_tolerance(opt);
  auto fdf = [&](double x) {
    const double p = std::exp(x);
    const double val = period_T({p, 0.0}, qt).value - L;
    // dT/dp at q = 0 from the moment identity, times dp/dx = p.
    const double c = center_gap({p, 0.0});
    const double dp = -p * (1.0 - p) * moment_I1({p, 0.0}, qt) / c;
    return std::pair<double, double>{val, p * dp};
  };
  const double hi = std::log1p(-1e-15);
  double lo = std::log(12.0) - L - kHomoclinicShift - 2.0;
  while (fdf(lo).first <= 0.0) lo -= 4.0;
  const auto root = bracketed_newton(fdf, lo, hi, false, opt.tol);

  GroundStateSolution sol;
  sol.spec = FlowerSpec{L, {}};
  sol.p = std::exp(root.x);
  sol.q_stem = 0.0;
  sol.newton_iterations = root.iterations;
  sol.residuals.period = std::abs(root.residual);
  sol.initialization = "bisection";
  finish(sol, opt);
  return sol;
}

GroundStateSolution solve_flower(const FlowerSpec& spec, const GroundStateOptions& opt) {
  check_flower(spec);
  if (spec.is_interval()) return solve_interval(spec.stem_length, opt);
  const auto verdict = region_membership(spec);
  if (verdict.region != Region::Nontrivial) {
    throw Error(ErrorCode::OutsideRegion,
                "lambda0 = " + std::to_string(verdict.lambda0) + " >= 1: only the zero state");
  }
  const double qt = quad_tolerance(opt);

  if (auto z0 = asymptotic_start(spec, qt)) {
    const auto nw = newton(spec, *z0, opt, qt);
    if (nw.converged) {
      auto sol = package(spec, nw, "asymptotic");
      finish(sol, opt);
      return sol;
    }
  }

  // Continuation from lengths + 2 down to the target in 8 geometric steps.
  {
    const int steps = 8;
    auto offset = [&](int k) { return 2.0 * (std::exp2(steps - k) - 1.0) / (std::exp2(steps) - 1.0); };
    std::optional<Eigen::VectorXd> z = asymptotic_start(inflated(spec, offset(0)), qt);
    int total = 0;
    for (int k = 0; z && k <= steps; ++k) {
      const auto nw = newton(inflated(spec, offset(k)), *z, opt, qt);
      total += nw.iterations;
      if (!nw.converged) {
        z.reset();
        break;
      }
      z = nw.z;
      if (k == steps) {
        auto sol = package(spec, nw, "continuation");
        sol.newton_iterations = total;
        finish(sol, opt);
        return sol;
      }
    }
  }

  if (auto z0 = reduced_bisection(spec, qt)) {
    const auto nw = newton(spec, *z0, opt, qt);
    if (nw.converged) {
      auto sol = package(spec, nw, "bisection");
      finish(sol, opt);
      return sol;
    }
    throw Error(ErrorCode::NewtonStalled,
                "best residual " + std::to_string(nw.fnorm) + " after bisection start");
  }
  throw Error(ErrorCode::NewtonStalled, "no initialization strategy converged");
}

GroundStateSolution solve_flower_from(const FlowerSpec& spec, double p,
                                      const std::vector<double>& q_loops,
                                      const GroundStateOptions& opt) {
  check_flower(spec);
  if (q_loops.size() != spec.loop_count()) {
    throw Error(ErrorCode::InvalidDomain, "one initial slope per loop required");
  }
  Eigen::VectorXd z(spec.loop_count() + 1);
  z[0] = std::log(p);
  for (std::size_t j = 0; j < q_loops.size(); ++j) {
    z[j + 1] = std::log(turning_point_p0({p, q_loops[j]}) / p);
  }
  if (!admissible(z)) throw Error(ErrorCode::InvalidDomain, "initial point not admissible");
  const double qt = quad_tolerance(opt);
  const auto nw = newton(spec, z, opt, qt);
  if (!nw.converged) {
    throw Error(ErrorCode::NewtonStalled, "best residual " + std::to_string(nw.fnorm));
  }
  auto sol = package(spec, nw, "given");
  finish(sol, opt);
  return sol;
}

JacobianReport jacobian_report(double p, const std::vector<double>& q_loops, double tol) {
  const std::size_t n = q_loops.size();
  double qs = 0.0;
  for (double q : q_loops) qs += 2.0 * q;
  JacobianReport r;
  r.matrix = Eigen::MatrixXd::Zero(n + 1, n + 1);
  const auto gT = grad_T({p, qs}, tol);
  r.matrix(0, 0) = gT.dp;
  std::vector<double> a(n), b(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto g0 = grad_T0({p, q_loops[j]}, tol);
    r.matrix(0, j + 1) = 2.0 * gT.dq;
    r.matrix(j + 1, 0) = g0.dp;
    r.matrix(j + 1, j + 1) = g0.dq;
    a[j] = g0.dq;
    b[j] = g0.dp;
  }
  r.determinant = r.matrix.fullPivLu().determinant();
  double prod = 1.0;
  for (double v : a) prod *= v;
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double others = b[j];
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) others *= a[k];
    }
    sum += others;
  }
  r.expanded_determinant = gT.dp * prod - 2.0 * gT.dq * sum;
  r.expected_sign = (n % 2 == 1) ? 1 : -1;
  return r;
}

void reconstruct_profile(GroundStateSolution& sol, double dx, double tol) {
  if (!(dx > 0.0)) throw Error(ErrorCode::InvalidDomain, "profile step must be positive");
  const double p = sol.p;
  const double L = sol.spec.stem_length;
  sol.profiles.clear();

  const int n = std::max(1, static_cast<int>(std::ceil(L / dx)));
  const double h = L / n;
  const auto stem = integrate_orbit(1.0, q_tilde({p, sol.q_stem}), h, n);
  EdgeProfile sp;
  sp.edge_id = "stem";
  for (int k = 0; k <= n; ++k) {
    sp.x.push_back(k * h);
    sp.u.push_back(1.0 - stem[k][0]);
    sp.du.push_back(-stem[k][1]);
  }
  sp.x.back() = L;
  double mismatch = std::abs(stem.back()[0] - p);
  double flux = stem.back()[1];
  sol.profiles.push_back(std::move(sp));

  for (std::size_t j = 0; j < sol.spec.loop_count(); ++j) {
    const double Lj = sol.spec.loop_half_lengths[j];
    const int m = std::max(1, static_cast<int>(std::ceil(Lj / dx)));
    const double hj = Lj / m;
    const auto half = integrate_orbit(sol.turning_points[j], 0.0, hj, m);
    EdgeProfile lp;
    lp.edge_id = "loop" + std::to_string(j + 1);
    for (int i = 0; i <= 2 * m; ++i) {
      const int s = i - m;
      const auto& y = half[static_cast<std::size_t>(std::abs(s))];
      lp.x.push_back(i * hj);
      lp.u.push_back(1.0 - y[0]);
      lp.du.push_back(s < 0 ? y[1] : -y[1]);
    }
    lp.x.back() = 2.0 * Lj;
    mismatch = std::max(mismatch, std::abs(half.back()[0] - p));
    flux += 2.0 * half.back()[1];
    sol.profiles.push_back(std::move(lp));
  }
  sol.residuals.continuity = mismatch;
  sol.residuals.kirchhoff_flux = std::abs(flux);
  sol.residuals.dirichlet = std::abs(sol.profiles.front().u.front());
  if (mismatch > 10.0 * tol) {
    throw Error(ErrorCode::StepTooLarge,
                "end-state mismatch " + std::to_string(mismatch) + " exceeds 10 tol");
  }
}

double proximity_check(const GroundStateSolution& sol) {
  if (sol.profiles.empty()) throw Error(ErrorCode::InvalidDomain, "profile not reconstructed");
  if (sol.spec.is_interval()) return std::abs(sol.profiles.front().u.back() - 1.0);
  double worst = 0.0;
  for (std::size_t k = 1; k < sol.profiles.size(); ++k) {
    for (double u : sol.profiles[k].u) worst = std::max(worst, std::abs(u - 1.0));
  }
  return worst;
}

double energy_of(const GroundStateSolution& sol) {
  double H = 0.0;
  for (const auto& e : sol.profiles) {
    auto density = [&](std::size_t k) {
      const double u = e.u[k];
      return 0.5 * (e.du[k] * e.du[k] - u * u) + u * u * u / 3.0;
    };
    for (std::size_t k = 0; k + 1 < e.x.size(); ++k) {
      H += 0.5 * (e.x[k + 1] - e.x[k]) * (density(k) + density(k + 1));
    }
  }
  return H;
}

double profile_value(const GroundStateSolution& sol, const std::string& edge_id, double x) {
  const auto& e = find_profile(sol, edge_id);
  if (e.x.size() < 2) return e.u.front();
  const auto it = std::upper_bound(e.x.begin(), e.x.end(), x);
  std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - e.x.begin(), 1)) - 1;
  k = std::min(k, e.x.size() - 2);
  const double h = e.x[k + 1] - e.x[k];
  const double t = std::clamp((x - e.x[k]) / h, 0.0, 1.0);
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * e.u[k] + (t3 - 2 * t2 + t) * h * e.du[k] +
         (-2 * t3 + 3 * t2) * e.u[k + 1] + (t3 - t2) * h * e.du[k + 1];
}

}  // namespace fkpp
