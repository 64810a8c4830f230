#pragma once

#include <functional>
#include <vector>

#include "dirac/core_types.hpp"
#include "dirac/newton.hpp"

namespace dirac {

struct StepResult {
  PhasePoint next;
  StepDiagnostics diagnostics;
};

struct ConstrainedStepResult {
  PhasePoint next;
  Vector lambda;  // multiplier at q_k
  Vector mu;      // gauge multiplier at q_{k+1}; always zero, see step_del_constrained
  StepDiagnostics diagnostics;
};

/// Optional context from the trajectory driver. With a previous point the
/// Newton guess is the linear extrapolation 2 x_k - x_{k-1} of the primary
/// unknown instead of x_k.
struct StepHint {
  const PhasePoint* previous = nullptr;
};

/// Implicit discrete Euler-Lagrange step: solves p_k + D1 L_d(q_k, q_{k+1}) = 0
/// for q_{k+1}, then p_{k+1} = D2 L_d(q_k, q_{k+1}).
StepResult step_del(const DiscreteLagrangian& L_d, const PhasePoint& z, const NewtonOptions& opts = {},
                    const StepHint& hint = {});

/// Nonholonomic step. Solves
///   p_k + D1 L_d(q_k, q_{k+1}) = A(q_k)^T lambda,   phi_d(q_k, q_{k+1}) = 0
/// for (q_{k+1}, lambda) and stores p_{k+1} = D2 L_d(q_k, q_{k+1}). The
/// membership D2 L_d - p_{k+1} in the annihilator at q_{k+1} fixes p_{k+1} only
/// up to A(q_{k+1})^T mu; mu = 0 is used, and the following step's own
/// multiplier absorbs that freedom. With m = 0 the residual and Newton path
/// coincide with step_del.
ConstrainedStepResult step_del_constrained(const DiscreteLagrangian& L_d, const ConstraintDistribution& dist,
                                           const PhasePoint& z, const NewtonOptions& opts = {},
                                           const StepHint& hint = {});

/// (+)-discrete Hamilton step: solves p_k = D1 H(q_k, p_{k+1}) for p_{k+1},
/// then q_{k+1} = D2 H(q_k, p_{k+1}).
StepResult step_ham_plus(const DiscreteHamiltonianPlus& H, const PhasePoint& z, const NewtonOptions& opts = {},
                         const StepHint& hint = {});

/// (-)-discrete Hamilton step: solves q_k = -D1 H(p_k, q_{k+1}) for q_{k+1},
/// then p_{k+1} = -D2 H(p_k, q_{k+1}).
StepResult step_ham_minus(const DiscreteHamiltonianMinus& H, const PhasePoint& z, const NewtonOptions& opts = {},
                          const StepHint& hint = {});

/// Implicit (+)-discrete Hamilton step with constraints. Solves
///   p_k - D1 H(q_k, pt) = A(q_k)^T lambda,   phi_d(q_k, D2 H(q_k, pt)) = 0
/// for (pt, lambda), sets q_{k+1} = D2 H(q_k, pt) and p_{k+1} = pt (mu = 0).
ConstrainedStepResult step_ham_constrained(const DiscreteHamiltonianPlus& H, const ConstraintDistribution& dist,
                                           const PhasePoint& z, const NewtonOptions& opts = {},
                                           const StepHint& hint = {});

/// Implicit (-)-discrete Hamilton step with constraints. The membership sits
/// in the momentum fed to H: with pt = p_k - A(q_k)^T lambda it solves
///   q_k = -D1 H(pt, q_{k+1}),   phi_d(q_k, q_{k+1}) = 0
/// for (q_{k+1}, lambda) and sets p_{k+1} = -D2 H(pt, q_{k+1}).
ConstrainedStepResult step_ham_constrained(const DiscreteHamiltonianMinus& H, const ConstraintDistribution& dist,
                                           const PhasePoint& z, const NewtonOptions& opts = {},
                                           const StepHint& hint = {});

using Stepper = std::function<StepResult(const PhasePoint&, const StepHint&)>;

struct Trajectory {
  std::vector<PhasePoint> points;
  std::vector<StepDiagnostics> diagnostics;  // diagnostics[k] produced points[k + 1]
  double h = 0.0;

  std::size_t steps() const { return diagnostics.size(); }
};

enum class GuessPolicy { kIdentity, kLinearExtrapolation };

/// Thrown by integrate when a step fails; carries the trajectory up to the
/// last accepted point.
class IntegrationFailure : public DiracError {
 public:
  IntegrationFailure(int step, ErrorCode cause, const std::string& what, Trajectory partial);

  int step() const noexcept { return step_; }
  ErrorCode cause() const noexcept { return cause_; }
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  int step_;
  ErrorCode cause_;
  Trajectory partial_;
};

Trajectory integrate(const Stepper& stepper, const PhasePoint& z0, int steps, double h = 0.0,
                     GuessPolicy guess = GuessPolicy::kIdentity);

}  // namespace dirac
