#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dirac/core_types.hpp"

namespace dirac {

using LagrangianFn = std::function<double(const Vector& q, const Vector& v)>;
using LagrangianGradFn = std::function<Vector(const Vector& q, const Vector& v)>;
using EnergyFn = std::function<double(const Vector& q, const Vector& p)>;
using FlowFn = std::function<PhasePoint(const PhasePoint& z, double t)>;

/// A continuous mechanical system L(q, v) with analytic partials, its energy
/// in phase-space coordinates, an optional constraint distribution and an
/// optional exact flow for oracles.
struct ContinuousSystem {
  std::string name;
  int n = 0;
  LagrangianFn L;
  LagrangianGradFn dL_dq;
  LagrangianGradFn dL_dv;
  EnergyFn energy;
  std::optional<ConstraintDistribution> constraint;
  std::optional<FlowFn> exact_flow;
};

enum class QuadratureKind { kMidpoint, kTrapezoidal };

struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::kMidpoint;
  double h = 0.1;

  void validate() const;
};

QuadratureKind parse_quadrature(const std::string& s);
const char* to_string(QuadratureKind kind);

/// midpoint:    L_d = h L((q0+q1)/2, (q1-q0)/h)
/// trapezoidal: L_d = h/2 [L(q0, (q1-q0)/h) + L(q1, (q1-q0)/h)]
/// Slot derivatives follow analytically from dL_dq and dL_dv.
DiscreteLagrangian discretize(const ContinuousSystem& sys, const QuadratureRule& rule);

using Params = std::map<std::string, double>;

/// free_particle (params n, mass), harmonic_oscillator (mass, omega),
/// pendulum (gravity: L = v^2/2 + gravity cos q), nonholonomic_particle
/// (n = 3, L = |v|^2/2, dz - y dx = 0, params phi_mode_left = 1 selects the
/// left phi_d). Throws DiracError(kUnknownSystem) for other names.
ContinuousSystem catalog(const std::string& name, const Params& params = {});

std::vector<std::string> catalog_names();

/// Separable L = v^T M v / 2 - V(q) with diagonal M.
enum class PotentialKind { kNone, kQuadratic, kCosine };

struct SeparableSpec {
  Vector mass;       // diagonal of M, entries > 0
  PotentialKind potential = PotentialKind::kNone;
  Vector stiffness;  // quadratic: V = sum k_i q_i^2 / 2; cosine: V = -sum k_i cos q_i
};

ContinuousSystem make_separable_system(const std::string& name, const SeparableSpec& spec);

/// Worst |energy(q, dL/dv) - (dL/dv . v - L)| over random (q, v) in [-1, 1]^2n.
double energy_consistency_error(const ContinuousSystem& sys, int samples = 20, unsigned long long seed = 0);

/// Worst relative error of dL_dq, dL_dv against central differences.
double lagrangian_gradient_error(const ContinuousSystem& sys, int samples = 20, unsigned long long seed = 0);

}  // namespace dirac
