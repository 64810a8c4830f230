#pragma once

#include "dirac/core_types.hpp"
#include "dirac/newton.hpp"

namespace dirac {

enum class Side { kPlus, kMinus };

const char* to_string(Side side);

/// (q1, D2 L_d(q0, q1)).
PhasePoint fl_plus(const DiscreteLagrangian& L_d, const Vector& q0, const Vector& q1);

/// (q0, -D1 L_d(q0, q1)).
PhasePoint fl_minus(const DiscreteLagrangian& L_d, const Vector& q0, const Vector& q1);

struct FiberDerivativeResult {
  PhasePoint point;
  /// Condition estimate of the slot Hessian inverted by the matching
  /// Legendre transform (D2D2 L_d for plus, D1D1 L_d for minus).
  double jacobian_cond;
};

FiberDerivativeResult fiber_derivative(Side side, const DiscreteLagrangian& L_d, const Vector& q0,
                                       const Vector& q1);

struct MomentumEnergy {
  double G;  // discrete momentum function
  double E;  // discrete generalized energy, G - L_d(q0, q1)
};

/// Plus: x.p() is p1, G = <p1, q1>. Minus: x.p() is p0, G = -<p0, q0>.
MomentumEnergy momentum_and_energy(Side side, const DiscreteLagrangian& L_d, const PontryaginPoint& x);

enum class HamiltonianDerivatives { kEnvelope, kFiniteDifference };

struct LegendreOptions {
  NewtonOptions newton = {1e-12, 50, Damping::kHalving, 30, 1e12, true};
  HamiltonianDerivatives derivatives = HamiltonianDerivatives::kEnvelope;
};

/// H_{d+}(q0, p1) = <p1, q1> - L_d(q0, q1) with q1 solving p1 = D2 L_d(q0, q1)
/// (Newton from q1 = q0). Envelope derivatives: D1 H = -D1 L_d, D2 H = q1.
/// Evaluation throws DiracError(kDegenerateLagrangian) when the slot Hessian
/// is singular and NoConvergence when the inner solve fails.
DiscreteHamiltonianPlus build_hamiltonian_plus(const DiscreteLagrangian& L_d, const LegendreOptions& opts = {});

/// H_{d-}(p0, q1) = -<p0, q0> - L_d(q0, q1) with q0 solving p0 = -D1 L_d(q0, q1)
/// (Newton from q0 = q1). Envelope derivatives: D1 H = -q0, D2 H = -D2 L_d.
DiscreteHamiltonianMinus build_hamiltonian_minus(const DiscreteLagrangian& L_d, const LegendreOptions& opts = {});

/// Inner Legendre solves, exposed for diagnostics: q1 with p1 = D2 L_d(q0, q1),
/// and q0 with p0 = -D1 L_d(q0, q1).
Vector solve_plus_legendre(const DiscreteLagrangian& L_d, const Vector& q0, const Vector& p1,
                           const LegendreOptions& opts = {});
Vector solve_minus_legendre(const DiscreteLagrangian& L_d, const Vector& p0, const Vector& q1,
                            const LegendreOptions& opts = {});

/// max(||p - FL_d^{+-} momentum||_inf, ||phi_d(q0, q1)||_inf); zero iff x lies
/// on the discrete Lagrangian constraint submanifold of that side.
double constraint_submanifold_residual(Side side, const DiscreteLagrangian& L_d, const ConstraintDistribution& dist,
                                       const PontryaginPoint& x);

}  // namespace dirac
