#include "dirac/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dirac/finite_difference.hpp"

namespace dirac {

bool all_finite(const Vector& v) {
  return std::all_of(v.data(), v.data() + v.size(), [](double x) { return std::isfinite(x); });
}

namespace {

void require_finite(const Vector& v, const char* what) {
  if (!all_finite(v)) {
    throw DiracError(ErrorCode::kNonFinite, std::string(what) + " has non-finite entries");
  }
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension " << b << " does not match " << a;
    throw DiracError(ErrorCode::kDimensionMismatch, os.str());
  }
}

Vector stack(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

ConfigPoint::ConfigPoint(Vector q) : q_(std::move(q)) {
  if (q_.size() < 1) throw DiracError(ErrorCode::kDimensionMismatch, "configuration dimension must be >= 1");
  require_finite(q_, "q");
}

PhasePoint::PhasePoint(Vector q, Vector p) : q_(std::move(q)), p_(std::move(p)) {
  if (q_.size() < 1) throw DiracError(ErrorCode::kDimensionMismatch, "configuration dimension must be >= 1");
  require_same_dim(q_.size(), p_.size(), "p");
  require_finite(q_, "q");
  require_finite(p_, "p");
}

Vector PhasePoint::stacked() const { return stack(q_, p_); }

PhasePoint PhasePoint::from_stacked(const Vector& z) {
  if (z.size() % 2 != 0) throw DiracError(ErrorCode::kDimensionMismatch, "stacked phase point has odd length");
  const Eigen::Index n = z.size() / 2;
  return PhasePoint(z.head(n), z.tail(n));
}

PontryaginPoint::PontryaginPoint(Vector q0, Vector q1, Vector p)
    : q0_(std::move(q0)), q1_(std::move(q1)), p_(std::move(p)) {
  if (q0_.size() < 1) throw DiracError(ErrorCode::kDimensionMismatch, "configuration dimension must be >= 1");
  require_same_dim(q0_.size(), q1_.size(), "q1");
  require_same_dim(q0_.size(), p_.size(), "p");
  require_finite(q0_, "q0");
  require_finite(q1_, "q1");
  require_finite(p_, "p");
}

DiscreteLagrangian make_analytic_lagrangian(int n, ScalarFn2 eval, SlotFn2 d1, SlotFn2 d2) {
  DiscreteLagrangian L;
  L.n = n;
  L.eval = std::move(eval);
  L.d1 = std::move(d1);
  L.d2 = std::move(d2);
  L.derivative_mode = DerivativeMode::kAnalytic;
  return L;
}

DiscreteLagrangian make_finite_difference_lagrangian(int n, ScalarFn2 eval) {
  DiscreteLagrangian L;
  L.n = n;
  L.eval = eval;
  L.d1 = [eval](const Vector& a, const Vector& b) { return fd::slot1_gradient(eval, a, b); };
  L.d2 = [eval](const Vector& a, const Vector& b) { return fd::slot2_gradient(eval, a, b); };
  L.derivative_mode = DerivativeMode::kFiniteDifference;
  return L;
}

ConstraintDistribution::ConstraintDistribution(int n, int m, AnnihilatorFn A, PhiFn phi, PhiMode mode)
    : n_(n), m_(m), A_(std::move(A)), phi_(std::move(phi)), mode_(mode) {
  if (n < 1) throw DiracError(ErrorCode::kDimensionMismatch, "configuration dimension must be >= 1");
  if (m < 0 || m >= n) {
    throw DiracError(ErrorCode::kDimensionMismatch, "constraint count m must satisfy 0 <= m < n");
  }
}

ConstraintDistribution ConstraintDistribution::unconstrained(int n) {
  return ConstraintDistribution(
      n, 0, [n](const Vector&) { return Matrix(0, n); },
      [](const Vector&, const Vector&) { return Vector(0); }, PhiMode::kMidpoint);
}

ConstraintDistribution ConstraintDistribution::from_annihilator(int n, int m, AnnihilatorFn A,
                                                                PhiMode mode) {
  if (mode == PhiMode::kUser) {
    throw DiracError(ErrorCode::kConfigError, "PhiMode::kUser requires with_user_phi");
  }
  PhiFn phi;
  if (mode == PhiMode::kMidpoint) {
    phi = [A](const Vector& q0, const Vector& q1) -> Vector {
      return A(0.5 * (q0 + q1)) * (q1 - q0);
    };
  } else {
    phi = [A](const Vector& q0, const Vector& q1) -> Vector { return A(q0) * (q1 - q0); };
  }
  return ConstraintDistribution(n, m, std::move(A), std::move(phi), mode);
}

ConstraintDistribution ConstraintDistribution::with_user_phi(int n, int m, AnnihilatorFn A, PhiFn phi_d) {
  return ConstraintDistribution(n, m, std::move(A), std::move(phi_d), PhiMode::kUser);
}

Matrix ConstraintDistribution::A(const Vector& q) const {
  Matrix a = A_(q);
  if (a.cols() != n_ || a.rows() != m_) {
    std::ostringstream os;
    os << "A(q) is " << a.rows() << "x" << a.cols() << ", expected " << m_ << "x" << n_;
    throw DiracError(ErrorCode::kDimensionMismatch, os.str());
  }
  return a;
}

Vector ConstraintDistribution::phi_d(const Vector& q0, const Vector& q1) const {
  Vector v = phi_(q0, q1);
  if (v.size() != m_) throw DiracError(ErrorCode::kDimensionMismatch, "phi_d has wrong length");
  return v;
}

bool has_full_row_rank(const Matrix& A) {
  if (A.rows() == 0) return true;
  if (A.rows() > A.cols()) return false;
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& s = svd.singularValues();
  return s[s.size() - 1] > kRankTolerance * s[0];
}

void CheckReport::finalize() { pass = std::isfinite(worst_residual) && worst_residual <= tolerance; }

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.pass; });
}

ValidationReport validate_system(const DiscreteLagrangian& L_d, const ConstraintDistribution& dist,
                                 const ValidationOptions& opts) {
  if (L_d.n != dist.n()) throw DiracError(ErrorCode::kDimensionMismatch, "L_d and distribution disagree on n");
  const int n = dist.n();
  Rng rng(opts.seed);
  ValidationReport report;

  CheckReport rank{"rank", false, 0.0, 0.0, opts.samples, ""};
  CheckReport diagonal{"diagonal", false, 0.0, opts.diagonal_tol, opts.samples, ""};
  CheckReport gradient{"gradient", false, 0.0, opts.gradient_tol, opts.samples, ""};
  int rank_failures = 0;

  for (int s = 0; s < opts.samples; ++s) {
    const Vector q = uniform_box(rng, n);
    if (dist.m() > 0) {
      const Matrix a = dist.A(q);
      if (!has_full_row_rank(a)) ++rank_failures;
      const Vector on_diag = dist.phi_d(q, q);
      diagonal.worst_residual = std::max(diagonal.worst_residual, on_diag.lpNorm<Eigen::Infinity>());
    }
    const Vector q1 = uniform_box(rng, n);
    const double e1 = fd::relative_gradient_error(L_d.d1(q, q1), fd::slot1_gradient(L_d.eval, q, q1));
    const double e2 = fd::relative_gradient_error(L_d.d2(q, q1), fd::slot2_gradient(L_d.eval, q, q1));
    gradient.worst_residual = std::max({gradient.worst_residual, e1, e2});
  }

  rank.worst_residual = rank_failures;
  rank.details = std::to_string(rank_failures) + " rank-deficient samples";
  if (dist.m() == 0) {
    rank.details = "unconstrained";
    diagonal.details = "unconstrained";
  }
  if (L_d.derivative_mode == DerivativeMode::kFiniteDifference) {
    gradient.details = "derivatives are finite differences";
  }
  rank.finalize();
  diagonal.finalize();
  gradient.finalize();
  report.checks = {rank, diagonal, gradient};
  return report;
}

}  // namespace dirac
