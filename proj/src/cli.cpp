#include "fkpp/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numbers>
#include <sstream>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "fkpp/error.hpp"
#include "fkpp/evolve.hpp"
#include "fkpp/graph_io.hpp"
#include "fkpp/groundstate.hpp"
#include "fkpp/spectral.hpp"
#include "fkpp/validate.hpp"

namespace fkpp::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr int kSchema = 1;

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, "bad number '" + text + "' for " + what);
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

// Integer flags go through double so that 1e3 is accepted.
CLI::Option* add_count(CLI::App* app, const std::string& name, int& target,
                       const std::string& desc) {
  return app->add_option_function<double>(
      name,
      [&target, name](double v) {
        if (v != std::floor(v) || std::abs(v) > 1e9) {
          throw CLI::ValidationError(name, "expects an integer");
        }
        target = static_cast<int>(v);
      },
      desc);
}

class Emitter {
 public:
  Emitter(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
    stream_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void write_csv_file(const std::string& path, const std::vector<EdgeSample>& samples) {
  Emitter e(path, std::cout);
  write_samples_csv(*e, samples);
}

json residuals_json(const GroundStateResiduals& r) {
  return {{"period", r.period},
          {"kirchhoff_flux", r.kirchhoff_flux},
          {"continuity", r.continuity},
          {"dirichlet", r.dirichlet}};
}

std::vector<EdgeSample> profile_samples(const GroundStateSolution& sol) {
  std::vector<EdgeSample> out;
  for (const auto& e : sol.profiles) {
    for (std::size_t k = 0; k < e.x.size(); ++k) out.push_back({e.edge_id, e.x[k], e.u[k]});
  }
  return out;
}

// --- subcommands -----------------------------------------------------------

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
  const auto graph = load_graph(cfg);
  require_valid(graph);
  const double h = cfg.mesh_h.value_or(1e-3);
  const auto flower = as_flower(graph);
  const auto disc = lambda0_discretized(graph, h);
  log.info("discretized lambda0 = {} after {} iterations", disc.lambda0, disc.iterations);

  json doc{{"schema", kSchema}};
  std::vector<std::tuple<std::string, double, double>> rows;
  if (flower) {
    const auto exact = lambda0_flower(*flower, cfg.tol.value_or(1e-14));
    const auto verdict = region_membership(*flower);
    doc["lambda0"] = exact.lambda0;
    doc["method"] = "transcendental";
    doc["residual"] = exact.residual;
    doc["lambda0_discretized"] = disc.lambda0;
    doc["discretized_residual"] = disc.residual;
    doc["gap"] = std::abs(exact.lambda0 - disc.lambda0);
    doc["region"] = verdict.region == Region::Nontrivial ? "nontrivial" : "trivial";
    doc["on_boundary"] = verdict.on_boundary;
    rows.emplace_back("transcendental", exact.lambda0, exact.residual);
  } else {
    doc["lambda0"] = disc.lambda0;
    doc["method"] = "discretized";
    doc["residual"] = disc.residual;
    doc["region"] = disc.lambda0 < 1.0 ? "nontrivial" : "trivial";
  }
  rows.emplace_back("discretized", disc.lambda0, disc.residual);
  doc["mesh_h"] = h;

  Emitter e(cfg.output, out);
  if (cfg.format == "csv") {
    *e << "method,lambda0,residual\n" << std::setprecision(17);
    for (const auto& [m, l, r] : rows) *e << m << ',' << l << ',' << r << '\n';
  } else {
    *e << doc.dump(2) << '\n';
  }
  return 0;
}

int cmd_groundstate(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
  const auto graph = load_graph(cfg);
  require_valid(graph);
  const auto spec = as_flower(graph);
  if (!spec) {
    throw Error(ErrorCode::NotAFlower,
                "exact ground states need an interval or flower graph; use `evolve` for "
                "general graphs");
  }
  GroundStateOptions opt;
  if (cfg.tol) opt.tol = *cfg.tol;
  const auto sol = solve_flower(*spec, opt);
  log.info("p = {} after {} Newton iterations ({})", sol.p, sol.newton_iterations,
           sol.initialization);

  json doc{{"schema", kSchema}};
  doc["stem"] = spec->stem_length;
  doc["loop_half_lengths"] = spec->loop_half_lengths;
  doc["p"] = sol.p;
  doc["q"] = sol.q_loops;
  doc["q_stem"] = sol.q_stem;
  doc["H"] = energy_of(sol);
  doc["lambda0"] = lambda0_flower(*spec).lambda0;
  doc["residuals"] = residuals_json(sol.residuals);
  doc["newton_iterations"] = sol.newton_iterations;
  doc["initialization"] = sol.initialization;
  doc["stem_energy"] = energy(sol.p, sol.q_stem).value;
  if (!spec->is_interval()) {
    const auto jr = jacobian_report(sol.p, sol.q_loops);
    doc["jacobian"] = {{"determinant", jr.determinant},
                       {"expected_sign", jr.expected_sign},
                       {"sign_ok", jr.determinant * jr.expected_sign > 0.0}};
    doc["proximity"] = proximity_check(sol);
  }

  const auto samples = profile_samples(sol);
  if (!cfg.profile.empty()) write_csv_file(cfg.profile, samples);
  Emitter e(cfg.output, out);
  if (cfg.format == "csv") {
    write_samples_csv(*e, samples);
  } else {
    *e << doc.dump(2) << '\n';
  }
  return 0;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
  const auto graph = load_graph(cfg);
  require_valid(graph);
  auto mesh = std::make_shared<const Discretization>(graph, cfg.mesh_h.value_or(1e-2));
  Field u0 = cfg.u0 == "hat" ? hat_field(mesh, cfg.amplitude)
                             : field_from_samples(mesh, read_samples_csv(cfg.u0));
  EvolveOptions opt;
  opt.dt = cfg.dt;
  opt.max_t = cfg.max_t;
  opt.tol = cfg.tol.value_or(1e-9);
  const auto tr = run_to_attractor(u0, opt);
  log.info("{} at t = {} ({} steps)", to_string(tr.terminal), tr.times.back(), tr.times.size() - 1);

  double initial_rate = 0.0;
  {
    // |du/dt| at t = 0 from one short step.
    Evolver ev(mesh);
    const double dt = std::min(opt.dt, 1e-3);
    initial_rate = (ev.step(u0, dt).values - u0.values).cwiseAbs().maxCoeff() / dt;
  }

  json doc{{"schema", kSchema}};
  doc["terminal"] = to_string(tr.terminal);
  doc["t_final"] = tr.times.back();
  doc["steps"] = tr.times.size() - 1;
  doc["H"] = tr.energy.back();
  doc["sup_norm"] = tr.sup_norm.back();
  doc["dt"] = tr.dt;
  doc["stationarity"] = tr.stationarity;
  doc["initial_rate"] = initial_rate;
  doc["comparison"] = {{"ok", tr.comparison.ok},
                       {"min_value", tr.comparison.min_value},
                       {"max_excess", tr.comparison.max_excess},
                       {"violations", tr.comparison.violations}};
  doc["mesh_h"] = mesh->max_step();

  if (!cfg.trace.empty()) {
    Emitter t(cfg.trace, out);
    *t << "t,H,sup_norm\n" << std::setprecision(17);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      *t << tr.times[k] << ',' << tr.energy[k] << ',' << tr.sup_norm[k] << '\n';
    }
  }
  if (!cfg.field.empty()) write_csv_file(cfg.field, tr.final_field.edge_samples());
  Emitter e(cfg.output, out);
  if (cfg.format == "csv") {
    write_samples_csv(*e, tr.final_field.edge_samples());
  } else {
    *e << doc.dump(2) << '\n';
  }
  return 0;
}

int cmd_region(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
  const double half_pi = 0.5 * std::numbers::pi;
  const int n = std::max(cfg.samples, 2);
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  if (cfg.mode == "symmetric") {
    header = {"N", "L", "L0"};
    for (int loops : cfg.loop_counts) {
      if (loops < 1) throw Error(ErrorCode::InvalidDomain, "loop count must be positive");
      for (int k = 0; k < n; ++k) {
        const double L = half_pi * k / (n - 1);
        rows.push_back({static_cast<double>(loops), L, lower_boundary_symmetric(L, loops)});
      }
    }
  } else if (cfg.mode == "surface") {
    header = {"L1", "L2", "L"};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double l1 = half_pi * i / (n - 1);
        const double l2 = half_pi * j / (n - 1);
        // On the edges L_j = pi/2 the critical stem length has shrunk to 0.
        const double L = (i == n - 1 || j == n - 1) ? 0.0 : lower_boundary({l1, l2});
        rows.push_back({l1, l2, L});
      }
    }
  } else if (cfg.mode == "point") {
    for (std::size_t j = 0; j < cfg.loop_half_lengths.size(); ++j) {
      header.push_back("L" + std::to_string(j + 1));
    }
    header.push_back("L");
    auto row = cfg.loop_half_lengths;
    row.push_back(lower_boundary(cfg.loop_half_lengths));
    rows.push_back(row);
  } else {
    throw Error(ErrorCode::ParseError, "unknown region mode '" + cfg.mode + "'");
  }
  log.info("region table with {} rows", rows.size());

  Emitter e(cfg.output, out);
  if (cfg.format == "csv") {
    for (std::size_t c = 0; c < header.size(); ++c) *e << (c ? "," : "") << header[c];
    *e << '\n' << std::setprecision(17);
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) *e << (c ? "," : "") << r[c];
      *e << '\n';
    }
  } else {
    json doc{{"schema", kSchema}, {"mode", cfg.mode}, {"columns", header}, {"rows", rows}};
    *e << doc.dump(2) << '\n';
  }
  return 0;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
  auto names = cfg.suites;
  if (names.empty() || (names.size() == 1 && names[0] == "all")) names = suite_names();
  json suites = json::array();
  bool all = true;
  std::vector<SuiteReport> reports;
  for (const auto& name : names) {
    reports.push_back(run_suite(name, cfg.seed, cfg.jobs));
    const auto& r = reports.back();
    log.info("suite {}: {}", name, r.passed() ? "pass" : "FAIL");
    all = all && r.passed();
    json checks = json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    suites.push_back({{"suite", name}, {"passed", r.passed()}, {"checks", checks}});
  }
  Emitter e(cfg.output, out);
  if (cfg.format == "csv") {
    *e << "suite,check,passed,detail\n";
    for (const auto& r : reports) {
      for (const auto& c : r.checks) {
        *e << r.suite << ',' << c.name << ',' << (c.passed ? 1 : 0) << ",\"" << c.detail << "\"\n";
      }
    }
  } else {
    json doc{{"schema", kSchema}, {"seed", cfg.seed}, {"passed", all}, {"suites", suites}};
    *e << doc.dump(2) << '\n';
  }
  return all ? 0 : 1;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return 2;
    case ErrorCode::BelowThreshold:
    case ErrorCode::OutsideRegion: return 3;
    case ErrorCode::NotAFlower: return 4;
    default: return 1;
  }
}

}  // namespace

FlowerSpec parse_flower_tokens(const std::vector<std::string>& tokens) {
  FlowerSpec spec;
  bool have_stem = false;
  for (const auto& token : tokens) {
    for (const auto& item : split(token, ' ')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::ParseError, "flower item '" + item + "' is not key=value");
      }
      const auto key = item.substr(0, eq);
      const auto value = item.substr(eq + 1);
      if (key == "stem") {
        spec.stem_length = parse_number(value, "stem");
        have_stem = true;
      } else if (key == "loops") {
        for (const auto& v : split(value, ',')) {
          spec.loop_half_lengths.push_back(0.5 * parse_number(v, "loops"));
        }
      } else {
        throw Error(ErrorCode::ParseError, "unknown flower key '" + key + "'");
      }
    }
  }
  if (!have_stem) throw Error(ErrorCode::ParseError, "flower needs stem=<length>");
  check_flower(spec);
  return spec;
}

MetricGraph load_graph(const RunConfig& cfg) {
  const bool has_flower = !cfg.flower_tokens.empty();
  if (has_flower == cfg.graph_path.has_value()) {
    throw Error(ErrorCode::ParseError, "give exactly one of --graph or --flower");
  }
  if (has_flower) return to_graph(parse_flower_tokens(cfg.flower_tokens));
  return load_graph_json(*cfg.graph_path);
}

void write_samples_csv(std::ostream& out, const std::vector<EdgeSample>& samples) {
  out << "edge_id,x,u\n" << std::setprecision(17);
  for (const auto& s : samples) out << s.edge_id << ',' << s.x << ',' << s.u << '\n';
}

std::vector<EdgeSample> read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("edge_id,x,u", 0) != 0) {
    throw Error(ErrorCode::ParseError, path + ": expected header edge_id,x,u");
  }
  std::vector<EdgeSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 3) throw Error(ErrorCode::ParseError, path + ": bad row '" + line + "'");
    out.push_back({cols[0], parse_number(cols[1], "x"), parse_number(cols[2], "u")});
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  spdlog::logger log("fkpp", sink);
  log.set_pattern("[%l] %v");
  log.set_level(spdlog::level::warn);
  if (const char* env = std::getenv("FKPP_LOG")) log.set_level(spdlog::level::from_str(env));

  RunConfig cfg;
  CLI::App app{"Fisher-KPP ground states on metric graphs"};
  app.require_subcommand(1);

  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph_path, "graph JSON file");
    sub->add_option("--flower", cfg.flower_tokens, "stem=<L> loops=<total1>,<total2>...")
        ->expected(1, 2);
    sub->add_option("--output,-o", cfg.output, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
  };

  auto* spectrum = app.add_subcommand("spectrum", "lowest Laplacian eigenvalue");
  add_graph(spectrum);
  add_tol(spectrum);
  spectrum->add_option("--mesh", cfg.mesh_h, "mesh width")->check(CLI::PositiveNumber);

  auto* ground = app.add_subcommand("groundstate", "positive ground state of a flower");
  add_graph(ground);
  add_tol(ground);
  ground->add_option("--profile", cfg.profile, "profile CSV path (edge_id,x,u)");

  auto* evolve = app.add_subcommand("evolve", "gradient flow to the attractor");
  add_graph(evolve);
  add_tol(evolve);
  evolve->add_option("--mesh", cfg.mesh_h, "mesh width")->check(CLI::PositiveNumber);
  evolve->add_option("--dt", cfg.dt, "time step")->check(CLI::PositiveNumber);
  evolve->add_option("--max-t", cfg.max_t, "final time")->check(CLI::PositiveNumber);
  evolve->add_option("--u0", cfg.u0, "`hat` or a CSV edge_id,x,u");
  evolve->add_option("--amplitude", cfg.amplitude, "hat amplitude")->check(CLI::NonNegativeNumber);
  evolve->add_option("--trace", cfg.trace, "trace CSV path (t,H,sup_norm)");
  evolve->add_option("--field", cfg.field, "terminal field CSV path (edge_id,x,u)");

  auto* region = app.add_subcommand("region", "lower boundary of the nontrivial region");
  region->add_option("--mode", cfg.mode, "symmetric, surface or point")
      ->check(CLI::IsMember({"symmetric", "surface", "point"}));
  std::string counts;
  region->add_option("--loops", counts, "symmetric: loop counts, e.g. 1,5");
  std::string halves;
  region->add_option("--half-lengths", halves, "point: loop half-lengths, e.g. 0.3,0.6");
  add_count(region, "--samples", cfg.samples, "samples per axis");
  region->add_option("--output,-o", cfg.output, "output file (default stdout)");
  region->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* validate = app.add_subcommand("validate", "property suites");
  validate->add_option("--suite", cfg.suites, "asymptotics, monotonicity, jacobian, dichotomy or all");
  validate->add_option_function<double>("--seed", [&](double v) {
    if (v < 0 || v != std::floor(v)) throw CLI::ValidationError("--seed", "expects an integer");
    cfg.seed = static_cast<std::uint64_t>(v);
  }, "random seed");
  add_count(validate, "--jobs", cfg.jobs, "worker threads (0 = all)");
  validate->add_option("--output,-o", cfg.output, "output file (default stdout)");
  validate->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!counts.empty()) {
      cfg.loop_counts.clear();
      for (const auto& c : split(counts, ',')) {
        cfg.loop_counts.push_back(static_cast<int>(parse_number(c, "--loops")));
      }
    }
    for (const auto& h : split(halves, ',')) {
      cfg.loop_half_lengths.push_back(parse_number(h, "--half-lengths"));
    }
    if (spectrum->parsed()) return cmd_spectrum(cfg, out, log);
    if (ground->parsed()) return cmd_groundstate(cfg, out, log);
    if (evolve->parsed()) return cmd_evolve(cfg, out, log);
    if (region->parsed()) return cmd_region(cfg, out, log);
    if (validate->parsed()) return cmd_validate(cfg, out, log);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace fkpp::cli
