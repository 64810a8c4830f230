#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirac/integrators.hpp"
#include "dirac/legendre.hpp"
#include "dirac/systems.hpp"

namespace dirac {

enum class Method { kDel, kDelConstrained, kHamPlus, kHamMinus, kHamPlusConstrained, kHamMinusConstrained };

Method parse_method(const std::string& s);
const char* to_string(Method m);
bool is_constrained(Method m);

enum class OutputFormat { kCsv, kJson };

/// Everything needed to run one integration. Mirrors the system-definition
/// JSON file; see README for the schema.
struct RunConfig {
  std::string system = "harmonic_oscillator";
  std::optional<int> n;
  Params params;
  std::optional<nlohmann::json> lagrangian;   // custom separable Lagrangian
  std::optional<nlohmann::json> constraints;  // overrides the catalog constraint
  Method method = Method::kDel;
  double h = 0.1;
  int steps = 100;
  std::optional<Vector> q0;
  std::optional<Vector> p0;
  QuadratureKind rule = QuadratureKind::kMidpoint;
  NewtonOptions newton;
  std::string output = "-";
  OutputFormat format = OutputFormat::kCsv;
};

/// Throws DiracError(kConfigError) naming the offending field.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// Catalog entry or custom Lagrangian, with the constraint override applied.
ContinuousSystem build_system(const RunConfig& cfg);

/// {"m", "A": {"type": "constant"|"affine", ...}, "phi_mode": "midpoint"|"left"}.
/// When A is absent, `fallback` supplies it (phi_mode may still change).
ConstraintDistribution parse_constraints(const nlohmann::json& j, int n,
                                         const std::optional<ConstraintDistribution>& fallback = std::nullopt);

/// Checks h, steps, Newton options and the q0/p0 lengths against n.
void validate_run_config(const RunConfig& cfg, int n);

/// The discrete objects every method is built from.
struct DiscreteProblem {
  ContinuousSystem system;
  DiscreteLagrangian L_d;
  ConstraintDistribution dist;
  DiscreteHamiltonianPlus H_plus;
  DiscreteHamiltonianMinus H_minus;
};

DiscreteProblem make_problem(const ContinuousSystem& sys, const QuadratureRule& rule,
                             const LegendreOptions& legendre = {});

/// Unconstrained methods ignore dist; constrained methods use it (m may be 0).
Stepper make_stepper(Method method, const DiscreteProblem& problem, const NewtonOptions& opts);

}  // namespace dirac
