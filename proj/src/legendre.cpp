#include "dirac/legendre.hpp"

#include <algorithm>

#include "dirac/finite_difference.hpp"

namespace dirac {

const char* to_string(Side side) { return side == Side::kPlus ? "plus" : "minus"; }

PhasePoint fl_plus(const DiscreteLagrangian& L_d, const Vector& q0, const Vector& q1) {
  return PhasePoint(q1, L_d.d2(q0, q1));
}

PhasePoint fl_minus(const DiscreteLagrangian& L_d, const Vector& q0, const Vector& q1) {
  return PhasePoint(q0, -L_d.d1(q0, q1));
}

FiberDerivativeResult fiber_derivative(Side side, const DiscreteLagrangian& L_d, const Vector& q0,
                                       const Vector& q1) {
  if (side == Side::kPlus) {
    const Matrix H = fd::central_jacobian([&](const Vector& x) { return L_d.d2(q0, x); }, q1);
    return {fl_plus(L_d, q0, q1), condition_number(H)};
  }
  const Matrix H = fd::central_jacobian([&](const Vector& x) { return L_d.d1(x, q1); }, q0);
  return {fl_minus(L_d, q0, q1), condition_number(H)};
}

MomentumEnergy momentum_and_energy(Side side, const DiscreteLagrangian& L_d, const PontryaginPoint& x) {
  const double G = side == Side::kPlus ? x.p().dot(x.q1()) : -x.p().dot(x.q0());
  return {G, G - L_d(x.q0(), x.q1())};
}

namespace {

Vector legendre_solve(const ResidualFn& residual, const Vector& guess, const NewtonOptions& opts) {
  try {
    return newton_solve(residual, std::nullopt, guess, opts).u;
  } catch (const NoConvergence&) {
    throw;
  } catch (const DiracError& e) {
    if (e.code() == ErrorCode::kSingularJacobian) {
      throw DiracError(ErrorCode::kDegenerateLagrangian,
                       std::string("discrete Legendre transform is not invertible: ") + e.what());
    }
    throw;
  }
}

template <class H>
void attach_fd_derivatives(H& ham) {
  const ScalarFn2 eval = ham.eval;
  ham.d1 = [eval](const Vector& a, const Vector& b) { return fd::slot1_gradient(eval, a, b); };
  ham.d2 = [eval](const Vector& a, const Vector& b) { return fd::slot2_gradient(eval, a, b); };
  ham.derivative_mode = DerivativeMode::kFiniteDifference;
}

}  // namespace

Vector solve_plus_legendre(const DiscreteLagrangian& L_d, const Vector& q0, const Vector& p1,
                           const LegendreOptions& opts) {
  return legendre_solve([&](const Vector& q1) -> Vector { return L_d.d2(q0, q1) - p1; }, q0, opts.newton);
}

Vector solve_minus_legendre(const DiscreteLagrangian& L_d, const Vector& p0, const Vector& q1,
                            const LegendreOptions& opts) {
  return legendre_solve([&](const Vector& q0) -> Vector { return L_d.d1(q0, q1) + p0; }, q1, opts.newton);
}

DiscreteHamiltonianPlus build_hamiltonian_plus(const DiscreteLagrangian& L_d, const LegendreOptions& opts) {
  DiscreteHamiltonianPlus H;
  H.n = L_d.n;
  H.eval = [L_d, opts](const Vector& q0, const Vector& p1) {
    const Vector q1 = solve_plus_legendre(L_d, q0, p1, opts);
    return p1.dot(q1) - L_d(q0, q1);
  };
  if (opts.derivatives == HamiltonianDerivatives::kEnvelope) {
    H.d1 = [L_d, opts](const Vector& q0, const Vector& p1) -> Vector {
      const Vector q1 = solve_plus_legendre(L_d, q0, p1, opts);
      return -L_d.d1(q0, q1);
    };
    H.d2 = [L_d, opts](const Vector& q0, const Vector& p1) -> Vector {
      return solve_plus_legendre(L_d, q0, p1, opts);
    };
    H.derivative_mode = DerivativeMode::kAnalytic;
  } else {
    attach_fd_derivatives(H);
  }
  return H;
}

DiscreteHamiltonianMinus build_hamiltonian_minus(const DiscreteLagrangian& L_d, const LegendreOptions& opts) {
  DiscreteHamiltonianMinus H;
  H.n = L_d.n;
  H.eval = [L_d, opts](const Vector& p0, const Vector& q1) {
    const Vector q0 = solve_minus_legendre(L_d, p0, q1, opts);
    return -p0.dot(q0) - L_d(q0, q1);
  };
  if (opts.derivatives == HamiltonianDerivatives::kEnvelope) {
    H.d1 = [L_d, opts](const Vector& p0, const Vector& q1) -> Vector {
      return -solve_minus_legendre(L_d, p0, q1, opts);
    };
    H.d2 = [L_d, opts](const Vector& p0, const Vector& q1) -> Vector {
      const Vector q0 = solve_minus_legendre(L_d, p0, q1, opts);
      return -L_d.d2(q0, q1);
    };
    H.derivative_mode = DerivativeMode::kAnalytic;
  } else {
    attach_fd_derivatives(H);
  }
  return H;
}

double constraint_submanifold_residual(Side side, const DiscreteLagrangian& L_d, const ConstraintDistribution& dist,
                                       const PontryaginPoint& x) {
  const Vector momentum = side == Side::kPlus ? Vector(L_d.d2(x.q0(), x.q1())) : Vector(-L_d.d1(x.q0(), x.q1()));
  const double dp = (x.p() - momentum).lpNorm<Eigen::Infinity>();
  const Vector phi = dist.phi_d(x.q0(), x.q1());
  const double dphi = phi.size() == 0 ? 0.0 : phi.lpNorm<Eigen::Infinity>();
  return std::max(dp, dphi);
}

}  // namespace dirac
