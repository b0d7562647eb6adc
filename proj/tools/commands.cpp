#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "hypflow/curvature.hpp"
#include "hypflow/fixtures.hpp"
#include "hypflow/flows.hpp"
#include "hypflow/phm_io.hpp"

namespace hypflow::cli {

namespace {

using json = nlohmann::json;

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("hypflow", sink);
  logger->set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("HYPFLOW_LOG_LEVEL")) {
    const std::string s = env;
    if (s == "error") {
      level = spdlog::level::err;
    } else if (s == "debug") {
      level = spdlog::level::debug;
    } else if (s != "info") {
      err << "warning: ignoring HYPFLOW_LOG_LEVEL=" << s << " (use error, info or debug)\n";
    }
  }
  logger->set_level(level);
  return logger;
}

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

std::string full(double x) { return fmt(x, 17); }

struct TargetArgs {
  double constant = 0.0;
  std::string path;
};

void add_target_options(CLI::App* cmd, TargetArgs& t) {
  cmd->add_option("--target-const", t.constant, "Constant target curvature (default 0)");
  cmd->add_option("--target", t.path, "Per-vertex target file ('t <i> <value>' lines)")->check(CLI::ExistingFile);
}

std::vector<double> resolve_target(const TargetArgs& t, int n) {
  if (t.path.empty()) return std::vector<double>(n, t.constant);
  return load_vertex_values(t.path, n, t.constant);
}

void write_u_file(const std::string& path, const std::vector<double>& u) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_vertex_values(out, u);
}

std::string dump_state(const MetricSurface& s, const std::string& dump, const std::string& log) {
  std::string path = dump;
  if (path.empty()) path = log.empty() ? "hypflow-failure.phm" : log + ".failure.phm";
  save_phm(path, s);
  write_u_file(path + ".u", s.metric.u);
  return path;
}

// Loads a surface, reporting parse problems on err. Returns nullopt on failure.
std::optional<MetricSurface> load_or_report(const std::string& path, std::ostream& err) {
  try {
    return load_phm(path);
  } catch (const ParseError& ex) {
    err << "error: " << path << ": " << ex.what() << "\n";
  } catch (const Error& ex) {
    err << "error: " << path << ": " << ex.what() << "\n";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  PhmData data;
  try {
    std::ifstream in(path);
    if (!in) {
      err << "error: cannot open " << path << "\n";
      return kNotConverged;
    }
    data = parse_phm_data(in);
  } catch (const ParseError& ex) {
    err << "error: " << path << ": " << ex.what() << "\n";
    return kNotConverged;
  }
  const auto issues = combinatorial_issues(data.vertex_count, data.faces);
  if (!issues.empty()) {
    out << "valid: no\n";
    for (const auto& s : issues) err << "error: " << s << "\n";
    return kNotConverged;
  }
  MetricSurface s;
  try {
    s = build_metric_surface(data);
  } catch (const Error& ex) {
    err << "error: " << path << ": " << ex.what() << "\n";
    return kNotConverged;
  }
  const auto rep = validate(s.surface, s.metric);
  out << "valid: " << (rep.valid ? "yes" : "no") << "\n";
  out << "euler_characteristic: " << rep.euler_characteristic << "\n";
  out << "vertices: " << rep.vertices << "\n";
  out << "edges: " << rep.edges << "\n";
  out << "faces: " << rep.faces << "\n";
  if (rep.min_slack_face >= 0) {
    out << "min_slack: " << full(rep.min_slack) << " (face " << rep.min_slack_face << ")\n";
  }
  if (rep.valid) out << "delaunay_edges: " << rep.delaunay_edges << "/" << rep.edges << "\n";
  for (const auto& e : rep.errors) err << "error: " << e << "\n";
  return rep.valid ? kOk : kNotConverged;
}

int cmd_report(const std::string& path, double alpha, const std::string& u_path, bool no_surgery,
               std::ostream& out, std::ostream& err) {
  auto loaded = load_or_report(path, err);
  if (!loaded) return kNotConverged;
  MetricSurface s = std::move(*loaded);
  const auto rep = validate(s.surface, s.metric);
  if (!rep.valid) {
    for (const auto& e : rep.errors) err << "error: " << e << "\n";
    return kNotConverged;
  }
  try {
    if (!u_path.empty()) {
      const auto u = load_vertex_values(u_path, s.surface.vertex_count(), 0.0);
      if (no_surgery) {
        apply_conformal_factor(s.surface, s.metric, u);
      } else {
        const auto pre = prepare_state(s);
        const auto flips = rescale_with_surgery(s.surface, s.metric, u);
        out << "surgery_flips: " << pre.size() + flips.size() << "\n";
      }
    }
  } catch (const ParseError& ex) {
    err << "error: " << u_path << ": " << ex.what() << "\n";
    return kNotConverged;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kRuntimeFailure;
  }

  bool admissible = true;
  for (int f = 0; f < s.surface.face_count(); ++f) admissible = admissible && face_lengths(s.surface, s.metric, f).admissible();

  std::vector<double> K;
  if (admissible) {
    K = curvature(s.surface, s.metric);
  } else {
    K = extended_curvature(s.surface, s.metric).K;
    out << "extended: yes (some faces are inadmissible, extended angles used)\n";
  }
  const auto R = alpha_curvature(K, s.metric.u, alpha);
  out << "alpha: " << full(alpha) << "\n";
  out << "# vertex K R_alpha\n";
  for (int i = 0; i < s.surface.vertex_count(); ++i) out << i << " " << full(K[i]) << " " << full(R[i]) << "\n";
  if (admissible) {
    out << "gauss_bonnet_residual: " << fmt(gauss_bonnet_residual(s.surface, s.metric, K), 3) << "\n";
    const auto bad = nondelaunay_edges(s.surface, s.metric);
    out << "delaunay: " << (bad.empty() ? "yes" : "no") << "\n";
    for (const auto& [e, w] : bad) {
      const EdgeKey k = s.surface.edge(e).key;
      out << "non_delaunay_edge: " << k.a << " " << k.b << " weight " << full(w) << "\n";
    }
  }
  return kOk;
}

struct FlowArgs {
  std::string path;
  std::string flow = "yamabe";
  double alpha = 0.0;
  TargetArgs target;
  double tol = 1e-10;
  int max_steps = 100000;
  double dt = 0.05;
  double dt_max = 2.0;
  std::string log;
  std::string out_u;
  std::string out_phm;
  std::string u_init;
  std::string dump;
};

int cmd_flow(const FlowArgs& a, spdlog::logger& logger, std::ostream& out, std::ostream& err) {
  auto loaded = load_or_report(a.path, err);
  if (!loaded) return kNotConverged;
  MetricSurface s = std::move(*loaded);
  const auto rep = validate(s.surface, s.metric);
  if (!rep.valid) {
    for (const auto& e : rep.errors) err << "error: " << e << "\n";
    return kNotConverged;
  }
  FlowConfig cfg;
  cfg.kind = *parse_flow_kind(a.flow);
  cfg.alpha = a.alpha;
  cfg.tol_converge = a.tol;
  cfg.max_steps = a.max_steps;
  cfg.dt_init = a.dt;
  cfg.dt_max = std::max(a.dt_max, a.dt);
  try {
    cfg.target = resolve_target(a.target, s.surface.vertex_count());
    if (!a.u_init.empty()) {
      const auto u = load_vertex_values(a.u_init, s.surface.vertex_count(), 0.0);
      prepare_state(s);
      rescale_with_surgery(s.surface, s.metric, u);
    }
  } catch (const ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kNotConverged;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kRuntimeFailure;
  }

  const auto regime = check_regime(rep.euler_characteristic, cfg.alpha, cfg.target);
  if (!regime.existence || !regime.convex) {
    err << "warning: target outside the convergence regime: " << regime.message << "\n";
  }

  std::ofstream log;
  if (!a.log.empty()) {
    log.open(a.log);
    if (!log) {
      err << "error: cannot write " << a.log << "\n";
      return kRuntimeFailure;
    }
  }
  logger.info("{} flow, alpha = {}, {} vertices", a.flow, cfg.alpha, s.surface.vertex_count());
  const auto on_step = [&](const StepRecord& r) {
    if (log.is_open()) {
      json j = {{"t", r.t},         {"dt", r.dt},   {"sup_err", r.sup_err}, {"min_M", r.min_M},
                {"max_M", r.max_M}, {"flips", r.flips}, {"energy", r.energy}};
      log << j.dump() << "\n" << std::flush;
    }
    logger.debug("t = {:.6g} dt = {:.3g} sup_err = {:.3e} flips = {}", r.t, r.dt, r.sup_err, r.flips);
  };
  const FlowRun run = run_flow(std::move(s), cfg, on_step);
  const double final_err = run.steps.empty() ? NAN : run.steps.back().sup_err;
  if (log.is_open()) {
    json j = {{"status", to_string(run.status)},
              {"steps", run.accepted_steps()},
              {"final_sup_err", final_err},
              {"u", run.final_state.metric.u}};
    if (run.status == FlowStatus::failed) j["reason"] = run.reason;
    log << j.dump() << "\n";
  }

  out << "status: " << to_string(run.status) << "\n";
  out << "steps: " << run.accepted_steps() << " (rejected " << run.rejected_steps << ")\n";
  if (!run.steps.empty()) out << "time: " << fmt(run.steps.back().t) << "\n";
  out << "final_sup_err: " << fmt(final_err, 3) << "\n";
  out << "flips: " << run.flips.size() << "\n";
  if (run.status == FlowStatus::converged && run.accepted_steps() > 2) {
    out << "decay_slope: " << fmt(run.decay_slope, 4) << "\n";
  }
  if (run.status == FlowStatus::failed) {
    err << "error: flow failed: " << run.reason << "\n";
    try {
      err << "state written to " << dump_state(run.final_state, a.dump, a.log) << "\n";
    } catch (const Error& ex) {
      err << "error: " << ex.what() << "\n";
    }
    return kRuntimeFailure;
  }
  try {
    if (!a.out_u.empty()) write_u_file(a.out_u, run.final_state.metric.u);
    if (!a.out_phm.empty()) save_phm(a.out_phm, run.final_state);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kRuntimeFailure;
  }
  return run.status == FlowStatus::converged ? kOk : kNotConverged;
}

struct NewtonArgs {
  std::string path;
  double alpha = 0.0;
  TargetArgs target;
  double tol = 1e-10;
  int max_iter = 100;
  std::uint64_t seed = 0;
  double spread = 0.25;
  bool force = false;
  std::string log;
  std::string out_u;
  std::string out_phm;
  std::string dump;
};

int cmd_newton(const NewtonArgs& a, spdlog::logger& logger, std::ostream& out, std::ostream& err) {
  auto loaded = load_or_report(a.path, err);
  if (!loaded) return kNotConverged;
  MetricSurface s = std::move(*loaded);
  const auto rep = validate(s.surface, s.metric);
  if (!rep.valid) {
    for (const auto& e : rep.errors) err << "error: " << e << "\n";
    return kNotConverged;
  }
  NewtonConfig cfg;
  cfg.alpha = a.alpha;
  cfg.tol = a.tol;
  cfg.max_iter = a.max_iter;
  try {
    cfg.target = resolve_target(a.target, s.surface.vertex_count());
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kNotConverged;
  }
  const auto regime = check_regime(rep.euler_characteristic, cfg.alpha, cfg.target);
  if (!regime.convex && !a.force) {
    err << "error: refusing to solve: " << regime.message << " (use --force to try anyway)\n";
    return kRegimeRefused;
  }
  if (!regime.existence || !regime.convex) {
    err << "warning: target outside the existence regime: " << regime.message << "\n";
  }

  std::ofstream log;
  if (!a.log.empty()) {
    log.open(a.log);
    if (!log) {
      err << "error: cannot write " << a.log << "\n";
      return kRuntimeFailure;
    }
  }

  NewtonResult res;
  try {
    prepare_state(s);
    if (a.spread > 0.0) {
      std::mt19937_64 rng(a.seed);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      std::vector<double> u0(s.metric.u);
      for (double& x : u0) x += a.spread * unit(rng);
      rescale_with_surgery(s.surface, s.metric, u0);
    }
    logger.info("newton, alpha = {}, seed = {}, {} vertices", cfg.alpha, a.seed, s.surface.vertex_count());
    res = newton_solve(s, cfg);
  } catch (const SolveFailure& ex) {
    err << "error: " << ex.what() << "\n";
    try {
      err << "state written to " << dump_state(ex.state(), a.dump, a.log) << "\n";
    } catch (const Error& e2) {
      err << "error: " << e2.what() << "\n";
    }
    return kRuntimeFailure;
  } catch (const DelaunayFailure& ex) {
    err << "error: " << ex.what() << "\n";
    try {
      err << "state written to " << dump_state(ex.state(), a.dump, a.log) << "\n";
    } catch (const Error& e2) {
      err << "error: " << e2.what() << "\n";
    }
    return kRuntimeFailure;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    try {
      err << "state written to " << dump_state(s, a.dump, a.log) << "\n";
    } catch (const Error& e2) {
      err << "error: " << e2.what() << "\n";
    }
    return kRuntimeFailure;
  }

  if (log.is_open()) {
    for (std::size_t k = 0; k < res.residuals.size(); ++k) {
      json j = {{"iter", k}, {"residual", res.residuals[k]}};
      if (k < res.step_sizes.size()) j["step"] = res.step_sizes[k];
      log << j.dump() << "\n";
    }
    json j = {{"status", res.converged ? "converged" : "max_iter"},
              {"steps", res.iterations},
              {"final_sup_err", res.residuals.back()},
              {"u", res.state.metric.u}};
    log << j.dump() << "\n";
  }
  out << "status: " << (res.converged ? "converged" : "max_iter") << "\n";
  out << "iterations: " << res.iterations << "\n";
  out << "final_sup_err: " << fmt(res.residuals.back(), 3) << "\n";
  out << "flips: " << res.flips.size() << "\n";
  try {
    if (!a.out_u.empty()) write_u_file(a.out_u, res.state.metric.u);
    if (!a.out_phm.empty()) save_phm(a.out_phm, res.state);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kRuntimeFailure;
  }
  return res.converged ? kOk : kNotConverged;
}

struct GenerateArgs {
  std::string kind;
  std::string output;
  int m = 5;
  int n = 5;
  double base = 1.0;
  double perturb = 0.0;
  std::uint64_t seed = 0;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  try {
    MarkedSurface surf;
    if (a.kind == "tetrahedron") {
      surf = fixtures::tetrahedron();
    } else if (a.kind == "octahedron") {
      surf = fixtures::octahedron();
    } else if (a.kind == "torus") {
      surf = fixtures::torus_grid(a.m, a.n);
    } else {
      surf = fixtures::genus2(a.m);
    }
    const MetricSurface s = fixtures::with_lengths(std::move(surf), a.base, a.perturb, a.seed);
    if (a.output.empty() || a.output == "-") {
      write_phm(out, s);
    } else {
      std::ofstream f(a.output);
      if (!f) throw Error("cannot write " + a.output);
      f << "# " << a.kind << ", base length " << a.base << ", perturbation " << a.perturb << ", seed " << a.seed
        << "\n";
      write_phm(f, s);
    }
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kNotConverged;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature flows and prescribed-curvature solver for piecewise hyperbolic surfaces", "hypflow"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file");

  std::string path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a .phm surface");
  validate_cmd->add_option("file", path, "Input .phm file")->required();

  double report_alpha = 0.0;
  std::string report_u;
  bool no_surgery = false;
  auto* report_cmd = app.add_subcommand("report", "Print per-vertex curvature");
  report_cmd->add_option("file", path, "Input .phm file")->required();
  report_cmd->add_option("--alpha", report_alpha, "Curvature exponent");
  report_cmd->add_option("--u", report_u, "Conformal factors ('t <i> <value>' lines)")->check(CLI::ExistingFile);
  report_cmd->add_flag("--no-surgery", no_surgery, "Scale on the given triangulation without flips");

  FlowArgs fa;
  auto* flow_cmd = app.add_subcommand("flow", "Run a Yamabe or Calabi flow with surgery");
  flow_cmd->add_option("file", fa.path, "Input .phm file")->required();
  flow_cmd->add_option("--flow", fa.flow, "yamabe or calabi")->check(CLI::IsMember({"yamabe", "calabi"}));
  flow_cmd->add_option("--alpha", fa.alpha, "Curvature exponent");
  add_target_options(flow_cmd, fa.target);
  flow_cmd->add_option("--tol", fa.tol, "Convergence tolerance on sup |F_alpha - target|")
      ->check(CLI::PositiveNumber);
  flow_cmd->add_option("--max-steps", fa.max_steps, "Maximum accepted steps")->check(CLI::NonNegativeNumber);
  flow_cmd->add_option("--dt", fa.dt, "Initial time step")->check(CLI::PositiveNumber);
  flow_cmd->add_option("--dt-max", fa.dt_max, "Largest time step")->check(CLI::PositiveNumber);
  flow_cmd->add_option("--u", fa.u_init, "Start from these conformal factors")->check(CLI::ExistingFile);
  flow_cmd->add_option("--log", fa.log, "JSON-lines step log");
  flow_cmd->add_option("--out-u", fa.out_u, "Write final conformal factors");
  flow_cmd->add_option("--out", fa.out_phm, "Write final surface");
  flow_cmd->add_option("--dump", fa.dump, "Where to write the state on failure");

  NewtonArgs na;
  auto* newton_cmd = app.add_subcommand("newton", "Solve for prescribed curvature by damped Newton");
  newton_cmd->add_option("file", na.path, "Input .phm file")->required();
  newton_cmd->add_option("--alpha", na.alpha, "Curvature exponent");
  add_target_options(newton_cmd, na.target);
  newton_cmd->add_option("--tol", na.tol, "Tolerance on sup |F - target w^alpha|")->check(CLI::PositiveNumber);
  newton_cmd->add_option("--max-iter", na.max_iter, "Maximum iterations")->check(CLI::NonNegativeNumber);
  newton_cmd->add_option("--seed", na.seed, "Seed for the random initial factors");
  newton_cmd->add_option("--init-spread", na.spread, "Initial factors drawn from U(-s, s)")
      ->check(CLI::NonNegativeNumber);
  newton_cmd->add_flag("--force", na.force, "Solve even when the energy is not convex");
  newton_cmd->add_option("--log", na.log, "JSON-lines residual log");
  newton_cmd->add_option("--out-u", na.out_u, "Write final conformal factors");
  newton_cmd->add_option("--out", na.out_phm, "Write final surface");
  newton_cmd->add_option("--dump", na.dump, "Where to write the state on failure");

  GenerateArgs ga;
  auto* gen_cmd = app.add_subcommand("generate", "Write a fixture surface");
  gen_cmd->add_option("kind", ga.kind, "tetrahedron, octahedron, torus or genus2")
      ->required()
      ->check(CLI::IsMember({"tetrahedron", "octahedron", "torus", "genus2"}));
  gen_cmd->add_option("-o,--output", ga.output, "Output file (default stdout)");
  gen_cmd->add_option("--m", ga.m, "Grid size");
  gen_cmd->add_option("--n", ga.n, "Second grid size (torus)");
  gen_cmd->add_option("--base", ga.base, "Base edge length")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--perturb", ga.perturb, "Relative length perturbation")->check(CLI::Range(0.0, 0.9));
  gen_cmd->add_option("--seed", ga.seed, "Perturbation seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kNotConverged;
  }

  auto logger = make_logger(err);
  if (validate_cmd->parsed()) return cmd_validate(path, out, err);
  if (report_cmd->parsed()) return cmd_report(path, report_alpha, report_u, no_surgery, out, err);
  if (flow_cmd->parsed()) return cmd_flow(fa, *logger, out, err);
  if (newton_cmd->parsed()) return cmd_newton(na, *logger, out, err);
  return cmd_generate(ga, out, err);
}

}  // namespace hypflow::cli
