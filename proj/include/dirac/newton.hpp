#pragma once

#include <functional>
#include <optional>

#include "dirac/core_types.hpp"

namespace dirac {

enum class Damping { kNone, kHalving };

struct NewtonOptions {
  double tol = 1e-12;  // residual inf-norm
  int max_iters = 50;
  Damping damping = Damping::kHalving;
  int max_halvings = 30;
  /// Jacobians with a larger 2-norm condition number are reported singular.
  double max_condition = 1e14;
  /// After the residual meets tol, try one more full step and keep it when it
  /// does not increase the residual. Not counted in iters.
  bool polish = true;

  /// Throws DiracError(kConfigError) when tol <= 0 or max_iters < 1.
  void validate() const;
};

struct NewtonResult {
  Vector u;
  int iters = 0;
  double residual_norm = 0.0;
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// Damped Newton iteration for residual(u) = 0. Without an analytic Jacobian
/// the residual is differenced centrally with step sqrt(eps) max(1, |u_i|).
/// Accepted iterates strictly decrease the residual inf-norm under halving.
/// Throws NoConvergence, or DiracError(kSingularJacobian) when the Jacobian
/// condition exceeds opts.max_condition.
NewtonResult newton_solve(const ResidualFn& residual, const std::optional<JacobianFn>& jac, const Vector& u0,
                          const NewtonOptions& opts = {});

/// 2-norm condition number via SVD; infinity for a zero matrix.
double condition_number(const Matrix& J);

}  // namespace dirac
