#include "dirac/integrators.hpp"

#include <algorithm>

namespace dirac {

namespace {

double norm_inf(const Vector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

void require_dim(const PhasePoint& z, int n) {
  if (z.dim() != n) throw DiracError(ErrorCode::kDimensionMismatch, "phase point dimension does not match the system");
}

void require_dist(const ConstraintDistribution& dist, int n) {
  if (dist.n() != n) throw DiracError(ErrorCode::kDimensionMismatch, "constraint distribution dimension does not match the system");
}

// Guess for an unknown whose identity guess is `current` and whose value at
// the previous point was `before`.
Vector guess_from(const Vector& current, const Vector* before) {
  if (before == nullptr) return current;
  return 2.0 * current - *before;
}

// Runs Newton and maps a singular Jacobian onto the caller's failure class.
NewtonResult solve_step(const ResidualFn& residual, const Vector& u0, const NewtonOptions& opts,
                        ErrorCode singular_as) {
  try {
    return newton_solve(residual, std::nullopt, u0, opts);
  } catch (const NoConvergence&) {
    throw;
  } catch (const DiracError& e) {
    if (e.code() == ErrorCode::kSingularJacobian) throw DiracError(singular_as, e.what());
    throw;
  }
}

Matrix checked_annihilator(const ConstraintDistribution& dist, const Vector& q) {
  Matrix A = dist.A(q);
  if (!has_full_row_rank(A)) {
    throw DiracError(ErrorCode::kRankDeficientConstraint, "A(q) is rank deficient at the current configuration");
  }
  return A;
}

Vector initial_unknowns(const Vector& primary, int m) {
  Vector u0 = Vector::Zero(primary.size() + m);
  u0.head(primary.size()) = primary;
  return u0;
}

ErrorCode constrained_singular_code(int m, ErrorCode unconstrained_code) {
  return m == 0 ? unconstrained_code : ErrorCode::kRankDeficientConstraint;
}

}  // namespace

StepResult step_del(const DiscreteLagrangian& L_d, const PhasePoint& z, const NewtonOptions& opts,
                    const StepHint& hint) {
  require_dim(z, L_d.n);
  const Vector& q0 = z.q();
  const Vector& p0 = z.p();
  auto residual = [&](const Vector& q1) -> Vector { return p0 + L_d.d1(q0, q1); };
  const Vector guess = guess_from(q0, hint.previous ? &hint.previous->q() : nullptr);
  const NewtonResult sol = solve_step(residual, guess, opts, ErrorCode::kDegenerateLagrangian);

  const Vector& q1 = sol.u;
  PhasePoint next(q1, L_d.d2(q0, q1));
  StepDiagnostics diag;
  diag.newton_iters = sol.iters;
  diag.residual_norm = sol.residual_norm;
  diag.dirac_residuals["p0+D1L"] = sol.residual_norm;
  diag.dirac_residuals["p1-D2L"] = 0.0;
  return {std::move(next), std::move(diag)};
}

ConstrainedStepResult step_del_constrained(const DiscreteLagrangian& L_d, const ConstraintDistribution& dist,
                                           const PhasePoint& z, const NewtonOptions& opts,
                                           const StepHint& hint) {
  require_dim(z, L_d.n);
  require_dist(dist, L_d.n);
  const Eigen::Index n = L_d.n;
  const int m = dist.m();
  const Vector& q0 = z.q();
  const Vector& p0 = z.p();
  const Matrix A0 = checked_annihilator(dist, q0);
  const Matrix A0t = A0.transpose();

  auto residual = [&](const Vector& u) -> Vector {
    const auto q1 = u.head(n);
    const auto lambda = u.tail(m);
    Vector r(n + m);
    r.head(n) = p0 + L_d.d1(q0, q1) - A0t * lambda;
    if (m > 0) r.tail(m) = dist.phi_d(q0, q1);
    return r;
  };
  const Vector u0 = initial_unknowns(guess_from(q0, hint.previous ? &hint.previous->q() : nullptr), m);
  const NewtonResult sol = solve_step(residual, u0, opts, constrained_singular_code(m, ErrorCode::kDegenerateLagrangian));

  const Vector q1 = sol.u.head(n);
  const Vector lambda = sol.u.tail(m);
  PhasePoint next(q1, L_d.d2(q0, q1));
  StepDiagnostics diag;
  diag.newton_iters = sol.iters;
  diag.residual_norm = sol.residual_norm;
  diag.multipliers = lambda;
  diag.constraint_violation = norm_inf(dist.phi_d(q0, q1));
  diag.dirac_residuals["p0+D1L-A^T lambda"] = norm_inf(p0 + L_d.d1(q0, q1) - A0t * lambda);
  diag.dirac_residuals["p1-D2L"] = 0.0;
  diag.dirac_residuals["phi_d"] = diag.constraint_violation;
  return {std::move(next), lambda, Vector::Zero(m), std::move(diag)};
}

StepResult step_ham_plus(const DiscreteHamiltonianPlus& H, const PhasePoint& z, const NewtonOptions& opts,
                         const StepHint& hint) {
  require_dim(z, H.n);
  const Vector& q0 = z.q();
  const Vector& p0 = z.p();
  auto residual = [&](const Vector& p1) -> Vector { return p0 - H.d1(q0, p1); };
  const Vector guess = guess_from(p0, hint.previous ? &hint.previous->p() : nullptr);
  const NewtonResult sol = solve_step(residual, guess, opts, ErrorCode::kDegenerateHamiltonian);

  const Vector& p1 = sol.u;
  PhasePoint next(H.d2(q0, p1), p1);
  StepDiagnostics diag;
  diag.newton_iters = sol.iters;
  diag.residual_norm = sol.residual_norm;
  diag.dirac_residuals["p0-D1H"] = sol.residual_norm;
  diag.dirac_residuals["q1-D2H"] = 0.0;
  return {std::move(next), std::move(diag)};
}

StepResult step_ham_minus(const DiscreteHamiltonianMinus& H, const PhasePoint& z, const NewtonOptions& opts,
                          const StepHint& hint) {
  require_dim(z, H.n);
  const Vector& q0 = z.q();
  const Vector& p0 = z.p();
  auto residual = [&](const Vector& q1) -> Vector { return q0 + H.d1(p0, q1); };
  const Vector guess = guess_from(q0, hint.previous ? &hint.previous->q() : nullptr);
  const NewtonResult sol = solve_step(residual, guess, opts, ErrorCode::kDegenerateHamiltonian);

  const Vector& q1 = sol.u;
  PhasePoint next(q1, -H.d2(p0, q1));
  StepDiagnostics diag;
  diag.newton_iters = sol.iters;
  diag.residual_norm = sol.residual_norm;
  diag.dirac_residuals["q0+D1H"] = sol.residual_norm;
  diag.dirac_residuals["p1+D2H"] = 0.0;
  return {std::move(next), std::move(diag)};
}

ConstrainedStepResult step_ham_constrained(const DiscreteHamiltonianPlus& H, const ConstraintDistribution& dist,
                                           const PhasePoint& z, const NewtonOptions& opts,
                                           const StepHint& hint) {
  require_dim(z, H.n);
  require_dist(dist, H.n);
  const Eigen::Index n = H.n;
  const int m = dist.m();
  const Vector& q0 = z.q();
  const Vector& p0 = z.p();
  const Matrix A0 = checked_annihilator(dist, q0);
  const Matrix A0t = A0.transpose();

  auto residual = [&](const Vector& u) -> Vector {
    const auto pt = u.head(n);
    const auto lambda = u.tail(m);
    Vector r(n + m);
    r.head(n) = p0 - H.d1(q0, pt) - A0t * lambda;
    if (m > 0) r.tail(m) = dist.phi_d(q0, H.d2(q0, pt));
    return r;
  };
  const Vector u0 = initial_unknowns(guess_from(p0, hint.previous ? &hint.previous->p() : nullptr), m);
  const NewtonResult sol = solve_step(residual, u0, opts, constrained_singular_code(m, ErrorCode::kDegenerateHamiltonian));

  const Vector pt = sol.u.head(n);
  const Vector lambda = sol.u.tail(m);
  const Vector q1 = H.d2(q0, pt);
  PhasePoint next(q1, pt);
  StepDiagnostics diag;
  diag.newton_iters = sol.iters;
  diag.residual_norm = sol.residual_norm;
  diag.multipliers = lambda;
  diag.constraint_violation = norm_inf(dist.phi_d(q0, q1));
  diag.dirac_residuals["p0-D1H-A^T lambda"] = norm_inf(p0 - H.d1(q0, pt) - A0t * lambda);
  diag.dirac_residuals["q1-D2H"] = 0.0;
  diag.dirac_residuals["phi_d"] = diag.constraint_violation;
  return {std::move(next), lambda, Vector::Zero(m), std::move(diag)};
}

ConstrainedStepResult step_ham_constrained(const DiscreteHamiltonianMinus& H, const ConstraintDistribution& dist,
                                           const PhasePoint& z, const NewtonOptions& opts,
                                           const StepHint& hint) {
  require_dim(z, H.n);
  require_dist(dist, H.n);
  const Eigen::Index n = H.n;
  const int m = dist.m();
  const Vector& q0 = z.q();
  const Vector& p0 = z.p();
  const Matrix A0 = checked_annihilator(dist, q0);
  const Matrix A0t = A0.transpose();

  auto residual = [&](const Vector& u) -> Vector {
    const auto q1 = u.head(n);
    const auto lambda = u.tail(m);
    Vector r(n + m);
    r.head(n) = q0 + H.d1(p0 - A0t * lambda, q1);
    if (m > 0) r.tail(m) = dist.phi_d(q0, q1);
    return r;
  };
  const Vector u0 = initial_unknowns(guess_from(q0, hint.previous ? &hint.previous->q() : nullptr), m);
  const NewtonResult sol = solve_step(residual, u0, opts, constrained_singular_code(m, ErrorCode::kDegenerateHamiltonian));

  const Vector q1 = sol.u.head(n);
  const Vector lambda = sol.u.tail(m);
  const Vector pt = p0 - A0t * lambda;
  PhasePoint next(q1, -H.d2(pt, q1));
  StepDiagnostics diag;
  diag.newton_iters = sol.iters;
  diag.residual_norm = sol.residual_norm;
  diag.multipliers = lambda;
  diag.constraint_violation = norm_inf(dist.phi_d(q0, q1));
  diag.dirac_residuals["q0+D1H"] = norm_inf(q0 + H.d1(pt, q1));
  diag.dirac_residuals["p1+D2H"] = 0.0;
  diag.dirac_residuals["phi_d"] = diag.constraint_violation;
  return {std::move(next), lambda, Vector::Zero(m), std::move(diag)};
}

IntegrationFailure::IntegrationFailure(int step, ErrorCode cause, const std::string& what, Trajectory partial)
    : DiracError(ErrorCode::kIntegrationFailed, "step " + std::to_string(step) + ": " + what),
      step_(step),
      cause_(cause),
      partial_(std::move(partial)) {}

Trajectory integrate(const Stepper& stepper, const PhasePoint& z0, int steps, double h, GuessPolicy guess) {
  if (steps < 0) throw DiracError(ErrorCode::kConfigError, "step count must be >= 0");
  Trajectory traj;
  traj.h = h;
  traj.points.reserve(static_cast<std::size_t>(steps) + 1);
  traj.diagnostics.reserve(static_cast<std::size_t>(steps));
  traj.points.push_back(z0);
  for (int k = 0; k < steps; ++k) {
    StepHint hint;
    if (guess == GuessPolicy::kLinearExtrapolation && k > 0) hint.previous = &traj.points[k - 1];
    try {
      StepResult r = stepper(traj.points.back(), hint);
      traj.points.push_back(std::move(r.next));
      traj.diagnostics.push_back(std::move(r.diagnostics));
    } catch (const DiracError& e) {
      throw IntegrationFailure(k, e.code(), e.what(), std::move(traj));
    }
  }
  return traj;
}

}  // namespace dirac
