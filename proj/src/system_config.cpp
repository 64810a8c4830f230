#include "dirac/system_config.hpp"

#include <fstream>
#include <sstream>

namespace dirac {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw DiracError(ErrorCode::kConfigError, msg); }

const std::vector<std::pair<std::string, Method>>& method_names() {
  static const std::vector<std::pair<std::string, Method>> names = {
      {"del", Method::kDel},
      {"del-constrained", Method::kDelConstrained},
      {"ham-plus", Method::kHamPlus},
      {"ham-minus", Method::kHamMinus},
      {"ham-plus-constrained", Method::kHamPlusConstrained},
      {"ham-minus-constrained", Method::kHamMinusConstrained},
  };
  return names;
}

Vector vector_field(const nlohmann::json& j, const std::string& field) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array()) config_error("field '" + field + "' must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) config_error("field '" + field + "' must contain only numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix matrix_field(const nlohmann::json& j, const std::string& field, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    config_error("field '" + field + "' must be an array of " + std::to_string(rows) + " rows");
  }
  Matrix M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = vector_field(j[static_cast<std::size_t>(r)], field);
    if (row.size() != cols) config_error("rows of '" + field + "' must have length " + std::to_string(cols));
    M.row(r) = row.transpose();
  }
  return M;
}

Vector broadcast(const nlohmann::json& j, const std::string& field, int n) {
  if (j.is_number()) return Vector::Constant(n, j.get<double>());
  Vector v = vector_field(j, field);
  if (v.size() != n) config_error("field '" + field + "' must have length n = " + std::to_string(n));
  return v;
}

template <class T>
T get_field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    config_error(std::string("field '") + key + "' is missing or has the wrong type");
  }
}

ContinuousSystem custom_system(const nlohmann::json& spec, int n) {
  SeparableSpec s;
  s.mass = spec.contains("mass") ? broadcast(spec["mass"], "lagrangian.mass", n) : Vector::Ones(n);
  if (spec.contains("potential")) {
    const auto& pot = spec["potential"];
    const std::string type = get_field<std::string>(pot, "type");
    if (type == "none") {
      s.potential = PotentialKind::kNone;
    } else if (type == "quadratic" || type == "cosine") {
      s.potential = type == "quadratic" ? PotentialKind::kQuadratic : PotentialKind::kCosine;
      if (!pot.contains("k")) config_error("field 'lagrangian.potential.k' is required");
      s.stiffness = broadcast(pot["k"], "lagrangian.potential.k", n);
    } else {
      config_error("unknown potential type '" + type + "'");
    }
  }
  ContinuousSystem sys = make_separable_system("custom", s);
  if (energy_consistency_error(sys) > 1e-10) config_error("custom Lagrangian energy check failed");
  return sys;
}

}  // namespace

Method parse_method(const std::string& s) {
  for (const auto& [name, m] : method_names()) {
    if (name == s) return m;
  }
  config_error("unknown method '" + s + "'");
}

const char* to_string(Method m) {
  for (const auto& [name, mm] : method_names()) {
    if (mm == m) return name.c_str();
  }
  return "unknown";
}

bool is_constrained(Method m) {
  return m == Method::kDelConstrained || m == Method::kHamPlusConstrained || m == Method::kHamMinusConstrained;
}

ConstraintDistribution parse_constraints(const nlohmann::json& j, int n,
                                         const std::optional<ConstraintDistribution>& fallback) {
  if (j.is_null()) return ConstraintDistribution::unconstrained(n);
  if (!j.is_object()) config_error("field 'constraints' must be an object");
  PhiMode mode = PhiMode::kMidpoint;
  if (j.contains("phi_mode")) {
    const std::string s = get_field<std::string>(j, "phi_mode");
    if (s == "midpoint") {
      mode = PhiMode::kMidpoint;
    } else if (s == "left") {
      mode = PhiMode::kLeft;
    } else if (s == "user") {
      config_error("phi_mode 'user' needs a phi_d function and is only available through the library API");
    } else {
      config_error("unknown phi_mode '" + s + "'");
    }
  }
  if (!j.contains("A")) {
    if (j.contains("m") && get_field<int>(j, "m") == 0) return ConstraintDistribution::unconstrained(n);
    if (!fallback) config_error("field 'constraints.A' is required");
    const ConstraintDistribution base = *fallback;
    return ConstraintDistribution::from_annihilator(
        n, base.m(), [base](const Vector& q) { return base.A(q); }, mode);
  }
  const int m = get_field<int>(j, "m");
  if (m < 0 || m >= n) config_error("field 'constraints.m' must satisfy 0 <= m < n");
  if (m == 0) return ConstraintDistribution::unconstrained(n);

  const auto& a = j["A"];
  const std::string type = get_field<std::string>(a, "type");
  Matrix constant;
  std::vector<Matrix> linear;
  if (type == "constant") {
    constant = matrix_field(a.contains("matrix") ? a["matrix"] : a["constant"], "constraints.A.matrix", m, n);
  } else if (type == "affine") {
    constant = a.contains("constant") ? matrix_field(a["constant"], "constraints.A.constant", m, n)
                                      : Matrix::Zero(m, n);
    if (a.contains("linear")) {
      const auto& lin = a["linear"];
      if (!lin.is_array() || static_cast<int>(lin.size()) != n) {
        config_error("field 'constraints.A.linear' must hold one m x n matrix per coordinate");
      }
      for (const auto& Li : lin) linear.push_back(matrix_field(Li, "constraints.A.linear", m, n));
    }
  } else {
    config_error("unknown constraints.A type '" + type + "'");
  }
  auto A = [constant, linear](const Vector& q) {
    Matrix out = constant;
    for (std::size_t i = 0; i < linear.size(); ++i) out += q[static_cast<Eigen::Index>(i)] * linear[i];
    return out;
  };
  return ConstraintDistribution::from_annihilator(n, m, A, mode);
}

RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) config_error("configuration must be a JSON object");
  RunConfig cfg;
  if (j.contains("system")) cfg.system = get_field<std::string>(j, "system");
  if (j.contains("lagrangian")) {
    cfg.lagrangian = j["lagrangian"];
    if (!j.contains("system")) cfg.system = "custom";
  }
  if (j.contains("n")) cfg.n = get_field<int>(j, "n");
  if (j.contains("params")) {
    if (!j["params"].is_object()) config_error("field 'params' must be an object");
    for (const auto& [key, value] : j["params"].items()) {
      if (!value.is_number()) config_error("params." + key + " must be a number");
      cfg.params[key] = value.get<double>();
    }
  }
  if (j.contains("constraints")) cfg.constraints = j["constraints"];
  if (j.contains("method")) cfg.method = parse_method(get_field<std::string>(j, "method"));
  if (j.contains("h")) cfg.h = get_field<double>(j, "h");
  if (j.contains("steps")) cfg.steps = get_field<int>(j, "steps");
  if (j.contains("q0")) cfg.q0 = vector_field(j["q0"], "q0");
  if (j.contains("p0")) cfg.p0 = vector_field(j["p0"], "p0");
  if (j.contains("rule")) cfg.rule = parse_quadrature(get_field<std::string>(j, "rule"));
  if (j.contains("newton")) {
    const auto& nw = j["newton"];
    if (nw.contains("tol")) cfg.newton.tol = get_field<double>(nw, "tol");
    if (nw.contains("max_iters")) cfg.newton.max_iters = get_field<int>(nw, "max_iters");
    if (nw.contains("damping")) {
      const std::string d = get_field<std::string>(nw, "damping");
      if (d == "none") {
        cfg.newton.damping = Damping::kNone;
      } else if (d == "halving") {
        cfg.newton.damping = Damping::kHalving;
      } else {
        config_error("unknown newton.damping '" + d + "'");
      }
    }
  }
  if (j.contains("output")) cfg.output = get_field<std::string>(j, "output");
  if (j.contains("format")) {
    const std::string f = get_field<std::string>(j, "format");
    if (f == "csv") {
      cfg.format = OutputFormat::kCsv;
    } else if (f == "json") {
      cfg.format = OutputFormat::kJson;
    } else {
      config_error("unknown format '" + f + "'");
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  try {
    return parse_run_config(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    config_error("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

ContinuousSystem build_system(const RunConfig& cfg) {
  ContinuousSystem sys;
  if (cfg.lagrangian) {
    if (!cfg.n) config_error("field 'n' is required with a custom lagrangian");
    if (*cfg.n < 1) config_error("field 'n' must be >= 1");
    sys = custom_system(*cfg.lagrangian, *cfg.n);
  } else {
    Params params = cfg.params;
    if (cfg.system == "free_particle" && cfg.n && !params.count("n")) params["n"] = *cfg.n;
    sys = catalog(cfg.system, params);
    if (cfg.n && *cfg.n != sys.n) {
      config_error("field 'n' = " + std::to_string(*cfg.n) + " does not match system '" + cfg.system +
                   "' (n = " + std::to_string(sys.n) + ")");
    }
  }
  if (cfg.constraints) sys.constraint = parse_constraints(*cfg.constraints, sys.n, sys.constraint);
  return sys;
}

void validate_run_config(const RunConfig& cfg, int n) {
  if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) config_error("field 'h' must be > 0");
  if (cfg.steps < 0) config_error("field 'steps' must be >= 0");
  cfg.newton.validate();
  auto check = [n](const std::optional<Vector>& v, const char* field) {
    if (!v) config_error(std::string("field '") + field + "' is required");
    if (v->size() != n) {
      config_error(std::string("field '") + field + "' has length " + std::to_string(v->size()) +
                   ", expected n = " + std::to_string(n));
    }
    if (!all_finite(*v)) config_error(std::string("field '") + field + "' has non-finite entries");
  };
  check(cfg.q0, "q0");
  check(cfg.p0, "p0");
}

DiscreteProblem make_problem(const ContinuousSystem& sys, const QuadratureRule& rule, const LegendreOptions& legendre) {
  DiscreteLagrangian L_d = discretize(sys, rule);
  ConstraintDistribution dist = sys.constraint ? *sys.constraint : ConstraintDistribution::unconstrained(sys.n);
  DiscreteHamiltonianPlus Hp = build_hamiltonian_plus(L_d, legendre);
  DiscreteHamiltonianMinus Hm = build_hamiltonian_minus(L_d, legendre);
  return {sys, std::move(L_d), std::move(dist), std::move(Hp), std::move(Hm)};
}

namespace {

// Unconstrained steppers do not see the distribution; record how far their
// steps leave it so that diagnostics stay comparable across methods.
Stepper with_violation(const ConstraintDistribution& dist, Stepper inner) {
  if (dist.m() == 0) return inner;
  return [dist, inner = std::move(inner)](const PhasePoint& z, const StepHint& hint) {
    StepResult r = inner(z, hint);
    r.diagnostics.constraint_violation = dist.phi_d(z.q(), r.next.q()).lpNorm<Eigen::Infinity>();
    return r;
  };
}

}  // namespace

Stepper make_stepper(Method method, const DiscreteProblem& P, const NewtonOptions& opts) {
  switch (method) {
    case Method::kDel:
      return with_violation(P.dist, [L = P.L_d, opts](const PhasePoint& z, const StepHint& hint) {
        return step_del(L, z, opts, hint);
      });
    case Method::kHamPlus:
      return with_violation(P.dist, [H = P.H_plus, opts](const PhasePoint& z, const StepHint& hint) {
        return step_ham_plus(H, z, opts, hint);
      });
    case Method::kHamMinus:
      return with_violation(P.dist, [H = P.H_minus, opts](const PhasePoint& z, const StepHint& hint) {
        return step_ham_minus(H, z, opts, hint);
      });
    case Method::kDelConstrained:
      return [L = P.L_d, D = P.dist, opts](const PhasePoint& z, const StepHint& hint) {
        auto r = step_del_constrained(L, D, z, opts, hint);
        return StepResult{std::move(r.next), std::move(r.diagnostics)};
      };
    case Method::kHamPlusConstrained:
      return [H = P.H_plus, D = P.dist, opts](const PhasePoint& z, const StepHint& hint) {
        auto r = step_ham_constrained(H, D, z, opts, hint);
        return StepResult{std::move(r.next), std::move(r.diagnostics)};
      };
    case Method::kHamMinusConstrained:
      return [H = P.H_minus, D = P.dist, opts](const PhasePoint& z, const StepHint& hint) {
        auto r = step_ham_constrained(H, D, z, opts, hint);
        return StepResult{std::move(r.next), std::move(r.diagnostics)};
      };
  }
  config_error("unknown method");
}

}  // namespace dirac
