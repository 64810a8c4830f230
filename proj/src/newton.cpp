#include "dirac/newton.hpp"

#include <cmath>
#include <limits>

#include "dirac/finite_difference.hpp"

namespace dirac {

void NewtonOptions::validate() const {
  if (!(tol > 0.0)) throw DiracError(ErrorCode::kConfigError, "Newton tol must be > 0");
  if (max_iters < 1) throw DiracError(ErrorCode::kConfigError, "Newton max_iters must be >= 1");
  if (max_halvings < 0) throw DiracError(ErrorCode::kConfigError, "Newton max_halvings must be >= 0");
}

double condition_number(const Matrix& J) {
  if (J.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(J);
  const auto& s = svd.singularValues();
  const double smin = s[s.size() - 1];
  if (smin == 0.0 || !std::isfinite(smin)) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

namespace {

double norm_inf(const Vector& r) { return r.size() == 0 ? 0.0 : r.lpNorm<Eigen::Infinity>(); }

}  // namespace

NewtonResult newton_solve(const ResidualFn& residual, const std::optional<JacobianFn>& jac, const Vector& u0,
                          const NewtonOptions& opts) {
  opts.validate();
  Vector u = u0;
  Vector r = residual(u);
  double rn = norm_inf(r);
  int iters = 0;

  auto newton_direction = [&](const Vector& at, const Vector& r_at) -> Vector {
    const Matrix J = jac ? (*jac)(at) : fd::central_jacobian(residual, at);
    if (J.rows() != r_at.size() || J.cols() != at.size()) {
      throw DiracError(ErrorCode::kDimensionMismatch, "Jacobian shape does not match the residual");
    }
    const double cond = condition_number(J);
    if (!(cond <= opts.max_condition)) {
      throw DiracError(ErrorCode::kSingularJacobian,
                       "Newton Jacobian is singular (condition " + std::to_string(cond) + ")");
    }
    return J.fullPivLu().solve(-r_at);
  };

  while (!(rn <= opts.tol)) {
    if (!std::isfinite(rn)) throw NoConvergence(iters, rn, "non-finite residual");
    if (iters >= opts.max_iters) throw NoConvergence(iters, rn);
    const Vector du = newton_direction(u, r);
    double alpha = 1.0;
    Vector u_try = u + du;
    Vector r_try = residual(u_try);
    double rn_try = norm_inf(r_try);
    if (opts.damping == Damping::kHalving) {
      int halvings = 0;
      while (!(rn_try < rn) && halvings < opts.max_halvings) {
        alpha *= 0.5;
        ++halvings;
        u_try = u + alpha * du;
        r_try = residual(u_try);
        rn_try = norm_inf(r_try);
      }
      if (!(rn_try < rn)) throw NoConvergence(iters + 1, rn, "line search found no decrease");
    }
    u = std::move(u_try);
    r = std::move(r_try);
    rn = rn_try;
    ++iters;
  }

  if (opts.polish && rn > 0.0) {
    try {
      const Vector u_try = u + newton_direction(u, r);
      const Vector r_try = residual(u_try);
      const double rn_try = norm_inf(r_try);
      if (rn_try <= rn) {
        u = u_try;
        rn = rn_try;
      }
    } catch (const DiracError&) {
      // The converged iterate stands.
    }
  }
  return {u, iters, rn};
}

}  // namespace dirac
