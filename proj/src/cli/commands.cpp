#include "dirac/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dirac/trajectory_io.hpp"
#include "dirac/verify.hpp"

namespace dirac::cli {

namespace {

constexpr int kVerifySamples = 50;

struct Prepared {
  DiscreteProblem problem;
  PhasePoint z0;
};

Prepared prepare(const RunConfig& cfg) {
  ContinuousSystem sys = build_system(cfg);
  validate_run_config(cfg, sys.n);
  DiscreteProblem problem = make_problem(sys, {cfg.rule, cfg.h});
  return {std::move(problem), PhasePoint(*cfg.q0, *cfg.p0)};
}

int output_m(const RunConfig& cfg, const DiscreteProblem& p) { return is_constrained(cfg.method) ? p.dist.m() : 0; }

// Runs the configured method; on failure returns the partial trajectory and
// fills `failure`.
Trajectory run_method(Method method, const RunConfig& cfg, const Prepared& prep, std::string* failure) {
  const Stepper stepper = make_stepper(method, prep.problem, cfg.newton);
  try {
    return integrate(stepper, prep.z0, cfg.steps, cfg.h);
  } catch (const IntegrationFailure& f) {
    if (failure) *failure = std::string(to_string(f.cause())) + " at " + f.what();
    return f.partial();
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Vector parse_csv_vector(const std::string& s, const char* field) {
  const std::vector<std::string> items = split_list(s);
  Vector v(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) {
    double x = 0.0;
    const auto res = std::from_chars(items[i].data(), items[i].data() + items[i].size(), x);
    if (res.ec != std::errc() || res.ptr != items[i].data() + items[i].size()) {
      throw DiracError(ErrorCode::kConfigError, std::string("field '") + field + "': cannot parse '" + items[i] + "'");
    }
    v[static_cast<Eigen::Index>(i)] = x;
  }
  return v;
}

CheckReport merged(std::string name, const std::vector<CheckReport>& parts, double tol) {
  CheckReport r;
  r.name = std::move(name);
  r.tolerance = tol;
  for (const CheckReport& p : parts) {
    r.samples += p.samples;
    if (!(p.worst_residual <= r.worst_residual)) {
      r.worst_residual = p.worst_residual;
      r.details = p.name + (p.details.empty() ? "" : ": " + p.details);
    }
  }
  r.finalize();
  return r;
}

CheckReport not_applicable(const std::string& name, double tol, const std::string& why) {
  CheckReport r;
  r.name = name;
  r.tolerance = tol;
  r.worst_residual = std::numeric_limits<double>::infinity();
  r.details = why;
  r.finalize();
  return r;
}

CheckReport dirac_check(const RunConfig& cfg, const Prepared& prep, double tol) {
  std::string failure;
  const Trajectory traj = run_method(cfg.method, cfg, prep, &failure);
  if (!failure.empty()) throw DiracError(ErrorCode::kIntegrationFailed, failure);
  const DiscreteProblem& P = prep.problem;
  switch (cfg.method) {
    case Method::kDel:
    case Method::kDelConstrained:
      return merged("dirac",
                    {check_dirac_membership(Side::kPlus, P.L_d, P.dist, traj, tol),
                     check_dirac_membership(Side::kMinus, P.L_d, P.dist, traj, tol)},
                    tol);
    case Method::kHamPlus:
    case Method::kHamPlusConstrained:
      return merged("dirac", {check_dirac_membership(P.H_plus, P.dist, traj, tol)}, tol);
    case Method::kHamMinus:
    case Method::kHamMinusConstrained:
      return merged("dirac", {check_dirac_membership(P.H_minus, P.dist, traj, tol)}, tol);
  }
  return not_applicable("dirac", tol, "unknown method");
}

CheckReport energy_check(const RunConfig& cfg, const Prepared& prep, double tol) {
  std::string failure;
  const Trajectory traj = run_method(cfg.method, cfg, prep, &failure);
  if (!failure.empty()) throw DiracError(ErrorCode::kIntegrationFailed, failure);
  const EnergyMomentumSeries s = energy_momentum_report(traj, prep.problem.system.energy, prep.problem.dist);
  CheckReport r;
  r.name = "energy";
  r.tolerance = tol;
  r.samples = static_cast<int>(s.energy.size());
  r.worst_residual = std::abs(s.drift_slope());
  r.details = "drift slope per step; max |E_k - E_0| = " + format_double(s.max_energy_deviation());
  r.finalize();
  return r;
}

CheckReport run_check(const std::string& name, const RunConfig& cfg, const Prepared& prep, double tol,
                      unsigned long long seed) {
  const DiscreteProblem& P = prep.problem;
  const int n = P.system.n;
  const Stepper stepper = make_stepper(cfg.method, P, cfg.newton);
  const std::vector<PhasePoint> samples = sample_phase_points(n, kVerifySamples, seed);

  if (name == "symplectic") {
    if (is_constrained(cfg.method) && P.dist.m() > 0) {
      return not_applicable(name, tol, "constrained flows are not symplectic maps of T*Q");
    }
    return check_symplectic(stepper, samples, tol);
  }
  if (name == "genfunc1") return check_generating_function(GeneratingFunctionType::kType1, stepper, P.L_d, samples, tol);
  if (name == "genfunc2") return check_generating_function(GeneratingFunctionType::kType2, stepper, P.H_plus, samples, tol);
  if (name == "genfunc3") return check_generating_function(GeneratingFunctionType::kType3, stepper, P.H_minus, samples, tol);
  if (name == "dirac") return dirac_check(cfg, prep, tol);
  if (name == "gradient") {
    CheckReport continuous;
    continuous.name = "continuous_lagrangian";
    continuous.worst_residual = lagrangian_gradient_error(P.system, kVerifySamples, seed);
    continuous.tolerance = tol;
    continuous.samples = kVerifySamples;
    continuous.finalize();
    return merged("gradient", {check_slot_gradients("discrete_lagrangian", P.L_d, kVerifySamples, tol, seed), continuous},
                  tol);
  }
  if (name == "energy") return energy_check(cfg, prep, tol);
  throw DiracError(ErrorCode::kConfigError, "unknown check '" + name + "'");
}

// Writes to cfg.output, or to `out` for "-".
template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw DiracError(ErrorCode::kConfigError, "cannot open output file '" + path + "'");
  write(file);
}

}  // namespace

std::vector<std::string> known_checks() {
  return {"symplectic", "genfunc1", "genfunc2", "genfunc3", "dirac", "gradient", "energy"};
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<Prepared> prep;
  try {
    prep = prepare(cfg);
  } catch (const DiracError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::string failure;
  const Trajectory traj = run_method(cfg.method, cfg, *prep, &failure);
  const int m = output_m(cfg, prep->problem);
  try {
    emit(cfg.output, out, [&](std::ostream& os) {
      if (cfg.format == OutputFormat::kCsv) {
        write_trajectory_csv(traj, m, os);
      } else {
        nlohmann::json j = {{"system", prep->problem.system.name},
                            {"method", to_string(cfg.method)},
                            {"rule", to_string(cfg.rule)},
                            {"h", cfg.h},
                            {"n", prep->problem.system.n},
                            {"m", m},
                            {"steps", cfg.steps},
                            {"trajectory", trajectory_to_json(traj, m)},
                            {"failure", failure.empty() ? nlohmann::json() : nlohmann::json(failure)}};
        os << j.dump(2) << '\n';
      }
    });
  } catch (const DiracError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!failure.empty()) {
    err << "solver failure: " << failure << " (partial trajectory written, " << traj.points.size() << " points)\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& checks, double tol, unsigned long long seed,
               std::ostream& out, std::ostream& err) {
  const std::vector<std::string> known = known_checks();
  if (checks.empty()) {
    err << "config error: no checks requested\n";
    return kExitConfig;
  }
  for (const std::string& c : checks) {
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      err << "config error: unknown check '" << c << "'\n";
      return kExitConfig;
    }
  }
  if (!(tol > 0.0)) {
    err << "config error: field 'tol' must be > 0\n";
    return kExitConfig;
  }
  std::optional<Prepared> prep;
  try {
    prep = prepare(cfg);
  } catch (const DiracError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  nlohmann::json reports = nlohmann::json::array();
  bool all_pass = true;
  try {
    for (const std::string& c : checks) {
      const CheckReport r = run_check(c, cfg, *prep, tol, seed);
      all_pass = all_pass && r.pass;
      reports.push_back(to_json(r));
    }
  } catch (const DiracError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  try {
    emit(cfg.output, out, [&](std::ostream& os) { os << reports.dump(2) << '\n'; });
  } catch (const DiracError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_compare(const RunConfig& cfg, const std::vector<std::string>& method_names, double tol, std::ostream& out,
                std::ostream& err) {
  if (method_names.size() < 2) {
    err << "config error: compare needs at least two methods\n";
    return kExitConfig;
  }
  std::vector<Method> methods;
  std::optional<Prepared> prep;
  try {
    for (const std::string& name : method_names) methods.push_back(parse_method(name));
    prep = prepare(cfg);
  } catch (const DiracError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::vector<Trajectory> runs;
  for (Method m : methods) {
    std::string failure;
    runs.push_back(run_method(m, cfg, *prep, &failure));
    if (!failure.empty()) {
      err << "solver failure in " << to_string(m) << ": " << failure << '\n';
      return kExitNumerical;
    }
  }
  nlohmann::json pairs = nlohmann::json::array();
  bool pass = true;
  for (std::size_t a = 0; a < runs.size(); ++a) {
    for (std::size_t b = a + 1; b < runs.size(); ++b) {
      double dev = 0.0;
      for (std::size_t k = 0; k < runs[a].points.size(); ++k) {
        const Vector d = runs[a].points[k].stacked() - runs[b].points[k].stacked();
        dev = std::max(dev, d.lpNorm<Eigen::Infinity>());
      }
      pass = pass && dev <= tol;
      pairs.push_back({{"a", to_string(methods[a])}, {"b", to_string(methods[b])}, {"max_deviation", dev}});
    }
  }
  nlohmann::json report = {{"system", prep->problem.system.name},
                           {"steps", cfg.steps},
                           {"h", cfg.h},
                           {"tol", tol},
                           {"methods", method_names},
                           {"pairs", pairs},
                           {"pass", pass}};
  try {
    emit(cfg.output, out, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
  } catch (const DiracError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return pass ? kExitOk : kExitCheckFailed;
}

namespace {

struct CommonFlags {
  std::string config, system, method, q0, p0, rule, format, output;
  double h = 0.0, newton_tol = 0.0;
  int steps = 0, max_iters = 0;
  CLI::Option *o_system = nullptr, *o_method = nullptr, *o_h = nullptr, *o_steps = nullptr, *o_q0 = nullptr,
              *o_p0 = nullptr, *o_rule = nullptr, *o_format = nullptr, *o_output = nullptr,
              *o_newton_tol = nullptr, *o_max_iters = nullptr;

  void attach(CLI::App* app) {
    app->set_help_flag("--help", "print this help");
    app->add_option("--config", config, "JSON system-definition / run file");
    o_system = app->add_option("--system", system, "catalog system name or path to a JSON file");
    o_method = app->add_option("--method", method, "del, del-constrained, ham-plus, ham-minus, ...");
    o_h = app->add_option("--h", h, "timestep");
    o_steps = app->add_option("--steps", steps, "number of steps");
    o_q0 = app->add_option("--q0", q0, "initial configuration, comma separated");
    o_p0 = app->add_option("--p0", p0, "initial momentum, comma separated");
    o_rule = app->add_option("--rule", rule, "midpoint or trapezoidal");
    o_format = app->add_option("--format", format, "csv or json");
    o_output = app->add_option("--output", output, "output path, '-' for stdout");
    o_newton_tol = app->add_option("--newton-tol", newton_tol, "Newton residual tolerance");
    o_max_iters = app->add_option("--max-iters", max_iters, "Newton iteration limit");
  }

  RunConfig build() const {
    RunConfig cfg;
    std::string file = config;
    const bool system_is_file = o_system->count() > 0 && std::filesystem::is_regular_file(system);
    if (system_is_file && file.empty()) file = system;
    if (!file.empty()) cfg = load_run_config(file);
    if (o_system->count() > 0 && !system_is_file) {
      cfg.system = system;
      cfg.lagrangian.reset();
    }
    if (o_method->count() > 0) cfg.method = parse_method(method);
    if (o_h->count() > 0) cfg.h = h;
    if (o_steps->count() > 0) cfg.steps = steps;
    if (o_q0->count() > 0) cfg.q0 = parse_csv_vector(q0, "q0");
    if (o_p0->count() > 0) cfg.p0 = parse_csv_vector(p0, "p0");
    if (o_rule->count() > 0) cfg.rule = parse_quadrature(rule);
    if (o_format->count() > 0) {
      if (format == "csv") {
        cfg.format = OutputFormat::kCsv;
      } else if (format == "json") {
        cfg.format = OutputFormat::kJson;
      } else {
        throw DiracError(ErrorCode::kConfigError, "unknown format '" + format + "'");
      }
    }
    if (o_output->count() > 0) cfg.output = output;
    if (o_newton_tol->count() > 0) cfg.newton.tol = newton_tol;
    if (o_max_iters->count() > 0) cfg.newton.max_iters = max_iters;
    return cfg;
  }
};

unsigned long long seed_from_env() {
  const char* s = std::getenv("DIRAC_SEED");
  if (s == nullptr || *s == '\0') return 0;
  unsigned long long v = 0;
  const std::string str(s);
  const auto res = std::from_chars(str.data(), str.data() + str.size(), v);
  if (res.ec != std::errc() || res.ptr != str.data() + str.size()) {
    throw DiracError(ErrorCode::kConfigError, "DIRAC_SEED must be a non-negative integer");
  }
  return v;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete Dirac mechanics integrators and structure checks", "dirac"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);

  CommonFlags run_flags, verify_flags, compare_flags;
  CLI::App* run = app.add_subcommand("run", "integrate and write the trajectory");
  run_flags.attach(run);

  CLI::App* verify = app.add_subcommand("verify", "run structure checks, print JSON reports");
  verify_flags.attach(verify);
  std::string checks;
  double verify_tol = 1e-6;
  verify->add_option("--checks", checks, "comma separated: symplectic,genfunc1,genfunc2,genfunc3,dirac,gradient,energy")
      ->required();
  verify->add_option("--tol", verify_tol, "check tolerance");

  CLI::App* compare = app.add_subcommand("compare", "compare methods from the same initial point");
  compare_flags.attach(compare);
  std::string methods;
  double compare_tol = 1e-8;
  compare->add_option("--methods", methods, "comma separated methods (at least two)")->required();
  compare->add_option("--tol", compare_tol, "maximum allowed deviation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags.build(), out, err);
    if (verify->parsed()) {
      return cmd_verify(verify_flags.build(), split_list(checks), verify_tol, seed_from_env(), out, err);
    }
    if (compare->parsed()) return cmd_compare(compare_flags.build(), split_list(methods), compare_tol, out, err);
  } catch (const DiracError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace dirac::cli
