#include "dirac/systems.hpp"

#include <algorithm>
#include <cmath>

#include "dirac/finite_difference.hpp"

namespace dirac {

void QuadratureRule::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw DiracError(ErrorCode::kConfigError, "timestep h must be > 0");
}

QuadratureKind parse_quadrature(const std::string& s) {
  if (s == "midpoint") return QuadratureKind::kMidpoint;
  if (s == "trapezoidal") return QuadratureKind::kTrapezoidal;
  throw DiracError(ErrorCode::kConfigError, "unknown quadrature rule '" + s + "'");
}

const char* to_string(QuadratureKind kind) {
  return kind == QuadratureKind::kMidpoint ? "midpoint" : "trapezoidal";
}

DiscreteLagrangian discretize(const ContinuousSystem& sys, const QuadratureRule& rule) {
  rule.validate();
  const double h = rule.h;
  const LagrangianFn L = sys.L;
  const LagrangianGradFn Lq = sys.dL_dq;
  const LagrangianGradFn Lv = sys.dL_dv;

  if (rule.kind == QuadratureKind::kMidpoint) {
    return make_analytic_lagrangian(
        sys.n,
        [=](const Vector& q0, const Vector& q1) { return h * L(0.5 * (q0 + q1), (q1 - q0) / h); },
        [=](const Vector& q0, const Vector& q1) -> Vector {
          const Vector qm = 0.5 * (q0 + q1);
          const Vector v = (q1 - q0) / h;
          return 0.5 * h * Lq(qm, v) - Lv(qm, v);
        },
        [=](const Vector& q0, const Vector& q1) -> Vector {
          const Vector qm = 0.5 * (q0 + q1);
          const Vector v = (q1 - q0) / h;
          return 0.5 * h * Lq(qm, v) + Lv(qm, v);
        });
  }
  return make_analytic_lagrangian(
      sys.n,
      [=](const Vector& q0, const Vector& q1) {
        const Vector v = (q1 - q0) / h;
        return 0.5 * h * (L(q0, v) + L(q1, v));
      },
      [=](const Vector& q0, const Vector& q1) -> Vector {
        const Vector v = (q1 - q0) / h;
        return 0.5 * h * Lq(q0, v) - 0.5 * (Lv(q0, v) + Lv(q1, v));
      },
      [=](const Vector& q0, const Vector& q1) -> Vector {
        const Vector v = (q1 - q0) / h;
        return 0.5 * h * Lq(q1, v) + 0.5 * (Lv(q0, v) + Lv(q1, v));
      });
}

namespace {

double param(const Params& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void require_positive(double x, const std::string& what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DiracError(ErrorCode::kConfigError, what + " must be > 0");
}

ContinuousSystem harmonic_oscillator(const Params& params) {
  const double mass = param(params, "mass", 1.0);
  const double omega = param(params, "omega", 1.0);
  require_positive(mass, "mass");
  require_positive(omega, "omega");
  SeparableSpec spec{Vector::Constant(1, mass), PotentialKind::kQuadratic, Vector::Constant(1, mass * omega * omega)};
  ContinuousSystem sys = make_separable_system("harmonic_oscillator", spec);
  sys.exact_flow = [mass, omega](const PhasePoint& z, double t) {
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    return PhasePoint(z.q() * c + z.p() * (s / (mass * omega)), -z.q() * (mass * omega * s) + z.p() * c);
  };
  return sys;
}

ContinuousSystem nonholonomic_particle(const Params& params) {
  SeparableSpec spec{Vector::Ones(3), PotentialKind::kNone, Vector::Zero(3)};
  ContinuousSystem sys = make_separable_system("nonholonomic_particle", spec);
  // q = (x, y, z); the one-form dz - y dx annihilates the admissible velocities.
  auto A = [](const Vector& q) {
    Matrix a(1, 3);
    a << -q[1], 0.0, 1.0;
    return a;
  };
  const PhiMode mode = param(params, "phi_mode_left", 0.0) != 0.0 ? PhiMode::kLeft : PhiMode::kMidpoint;
  sys.constraint = ConstraintDistribution::from_annihilator(3, 1, A, mode);
  return sys;
}

}  // namespace

ContinuousSystem make_separable_system(const std::string& name, const SeparableSpec& spec) {
  const Eigen::Index n = spec.mass.size();
  if (n < 1) throw DiracError(ErrorCode::kConfigError, "system dimension must be >= 1");
  if ((spec.mass.array() <= 0.0).any() || !all_finite(spec.mass)) {
    throw DiracError(ErrorCode::kConfigError, "mass entries must be > 0");
  }
  if (spec.potential != PotentialKind::kNone && spec.stiffness.size() != n) {
    throw DiracError(ErrorCode::kConfigError, "potential coefficients must have length n");
  }
  const Vector mass = spec.mass;
  const Vector k = spec.potential == PotentialKind::kNone ? Vector::Zero(n) : spec.stiffness;
  const PotentialKind kind = spec.potential;

  auto V = [=](const Vector& q) -> double {
    switch (kind) {
      case PotentialKind::kNone: return 0.0;
      case PotentialKind::kQuadratic: return 0.5 * (k.array() * q.array().square()).sum();
      case PotentialKind::kCosine: return -(k.array() * q.array().cos()).sum();
    }
    return 0.0;
  };
  auto dV = [=](const Vector& q) -> Vector {
    switch (kind) {
      case PotentialKind::kNone: return Vector::Zero(q.size());
      case PotentialKind::kQuadratic: return (k.array() * q.array()).matrix();
      case PotentialKind::kCosine: return (k.array() * q.array().sin()).matrix();
    }
    return Vector::Zero(q.size());
  };

  ContinuousSystem sys;
  sys.name = name;
  sys.n = static_cast<int>(n);
  sys.L = [=](const Vector& q, const Vector& v) { return 0.5 * (mass.array() * v.array().square()).sum() - V(q); };
  sys.dL_dq = [=](const Vector& q, const Vector&) -> Vector { return -dV(q); };
  sys.dL_dv = [=](const Vector&, const Vector& v) -> Vector { return (mass.array() * v.array()).matrix(); };
  sys.energy = [=](const Vector& q, const Vector& p) {
    return 0.5 * (p.array().square() / mass.array()).sum() + V(q);
  };
  return sys;
}

ContinuousSystem catalog(const std::string& name, const Params& params) {
  ContinuousSystem sys;
  if (name == "free_particle") {
    const double nd = param(params, "n", 1.0);
    if (nd < 1.0 || nd != std::floor(nd)) throw DiracError(ErrorCode::kConfigError, "free_particle n must be a positive integer");
    const double mass = param(params, "mass", 1.0);
    require_positive(mass, "mass");
    const auto n = static_cast<Eigen::Index>(nd);
    sys = make_separable_system(name, {Vector::Constant(n, mass), PotentialKind::kNone, Vector::Zero(n)});
    sys.exact_flow = [mass](const PhasePoint& z, double t) { return PhasePoint(z.q() + (t / mass) * z.p(), z.p()); };
  } else if (name == "harmonic_oscillator") {
    sys = harmonic_oscillator(params);
  } else if (name == "pendulum") {
    const double gravity = param(params, "gravity", 1.0);
    require_positive(gravity, "gravity");
    sys = make_separable_system(name, {Vector::Ones(1), PotentialKind::kCosine, Vector::Constant(1, gravity)});
  } else if (name == "nonholonomic_particle") {
    sys = nonholonomic_particle(params);
  } else {
    throw DiracError(ErrorCode::kUnknownSystem, "unknown system '" + name + "'");
  }
  const double err = energy_consistency_error(sys);
  if (err > 1e-10) {
    throw DiracError(ErrorCode::kConfigError, "energy of '" + name + "' is inconsistent with its Lagrangian");
  }
  return sys;
}

std::vector<std::string> catalog_names() {
  return {"free_particle", "harmonic_oscillator", "pendulum", "nonholonomic_particle"};
}

double energy_consistency_error(const ContinuousSystem& sys, int samples, unsigned long long seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector q = uniform_box(rng, sys.n);
    const Vector v = uniform_box(rng, sys.n);
    const Vector p = sys.dL_dv(q, v);
    const double E = p.dot(v) - sys.L(q, v);
    worst = std::max(worst, std::abs(sys.energy(q, p) - E));
  }
  return worst;
}

double lagrangian_gradient_error(const ContinuousSystem& sys, int samples, unsigned long long seed) {
  Rng rng(seed);
  double worst = 0.0;
  const ScalarFn2 L = sys.L;
  for (int s = 0; s < samples; ++s) {
    const Vector q = uniform_box(rng, sys.n);
    const Vector v = uniform_box(rng, sys.n);
    worst = std::max(worst, fd::relative_gradient_error(sys.dL_dq(q, v), fd::slot1_gradient(L, q, v)));
    worst = std::max(worst, fd::relative_gradient_error(sys.dL_dv(q, v), fd::slot2_gradient(L, q, v)));
  }
  return worst;
}

}  // namespace dirac
