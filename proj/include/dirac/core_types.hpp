#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dirac/errors.hpp"

namespace dirac {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

bool all_finite(const Vector& v);

/// Configuration coordinates q in a single flat chart of dimension n >= 1.
class ConfigPoint {
 public:
  explicit ConfigPoint(Vector q);

  const Vector& q() const noexcept { return q_; }
  Eigen::Index dim() const noexcept { return q_.size(); }

 private:
  Vector q_;
};

/// A point z = (q, p) of the cotangent bundle T*Q.
class PhasePoint {
 public:
  PhasePoint(Vector q, Vector p);

  const Vector& q() const noexcept { return q_; }
  const Vector& p() const noexcept { return p_; }
  Eigen::Index dim() const noexcept { return q_.size(); }

  /// Stacked (q, p), length 2n.
  Vector stacked() const;
  static PhasePoint from_stacked(const Vector& z);

 private:
  Vector q_;
  Vector p_;
};

/// A point (q0, q1) + p of the discrete Pontryagin bundle (Q x Q) + T*Q.
/// Which momentum p denotes (p1 on the plus side, p0 on the minus side) is
/// fixed by the operation consuming it.
class PontryaginPoint {
 public:
  PontryaginPoint(Vector q0, Vector q1, Vector p);

  const Vector& q0() const noexcept { return q0_; }
  const Vector& q1() const noexcept { return q1_; }
  const Vector& p() const noexcept { return p_; }
  Eigen::Index dim() const noexcept { return q0_.size(); }

 private:
  Vector q0_;
  Vector q1_;
  Vector p_;
};

enum class DerivativeMode { kAnalytic, kFiniteDifference };

using ScalarFn2 = std::function<double(const Vector&, const Vector&)>;
using SlotFn2 = std::function<Vector(const Vector&, const Vector&)>;

/// A scalar function of two n-vector slots with its slot derivatives.
/// Shared representation of discrete Lagrangians and discrete Hamiltonians;
/// the concrete wrappers below keep the three roles from being mixed up.
struct TwoSlotFunction {
  int n = 0;
  ScalarFn2 eval;
  SlotFn2 d1;
  SlotFn2 d2;
  DerivativeMode derivative_mode = DerivativeMode::kAnalytic;

  double operator()(const Vector& a, const Vector& b) const { return eval(a, b); }
};

/// L_d(q0, q1).
struct DiscreteLagrangian : TwoSlotFunction {};

/// H_{d+}(q0, p1).
struct DiscreteHamiltonianPlus : TwoSlotFunction {};

/// H_{d-}(p0, q1).
struct DiscreteHamiltonianMinus : TwoSlotFunction {};

DiscreteLagrangian make_analytic_lagrangian(int n, ScalarFn2 eval, SlotFn2 d1, SlotFn2 d2);

/// Slot derivatives by central differences of eval.
DiscreteLagrangian make_finite_difference_lagrangian(int n, ScalarFn2 eval);

enum class PhiMode { kMidpoint, kLeft, kUser };

/// Annihilator rows A(q) (m x n) spanning the annihilator of the admissible
/// velocities at q, and a discrete constraint function phi_d whose zero set is
/// the admissible set of position pairs. m == 0 is the unconstrained case.
class ConstraintDistribution {
 public:
  using AnnihilatorFn = std::function<Matrix(const Vector&)>;
  using PhiFn = std::function<Vector(const Vector&, const Vector&)>;

  static ConstraintDistribution unconstrained(int n);

  /// phi_d built from A: midpoint A((q0+q1)/2)(q1-q0), left A(q0)(q1-q0).
  static ConstraintDistribution from_annihilator(int n, int m, AnnihilatorFn A,
                                                 PhiMode mode = PhiMode::kMidpoint);

  static ConstraintDistribution with_user_phi(int n, int m, AnnihilatorFn A, PhiFn phi_d);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  PhiMode phi_mode() const noexcept { return mode_; }
  bool unconstrained_case() const noexcept { return m_ == 0; }

  /// Throws DimensionMismatch on a wrongly shaped A.
  Matrix A(const Vector& q) const;
  Vector phi_d(const Vector& q0, const Vector& q1) const;

 private:
  ConstraintDistribution(int n, int m, AnnihilatorFn A, PhiFn phi, PhiMode mode);

  int n_;
  int m_;
  AnnihilatorFn A_;
  PhiFn phi_;
  PhiMode mode_;
};

/// Relative rank threshold shared by every rank test on A(q).
inline constexpr double kRankTolerance = 1e-10;

/// True iff the smallest singular value of A exceeds kRankTolerance times the largest.
bool has_full_row_rank(const Matrix& A);

struct StepDiagnostics {
  int newton_iters = 0;
  double residual_norm = 0.0;
  Vector multipliers;  // lambda; empty when unconstrained
  std::map<std::string, double> dirac_residuals;
  double constraint_violation = 0.0;
};

/// Outcome of one named numerical check.
struct CheckReport {
  std::string name;
  bool pass = false;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  std::string details;

  /// Sets pass from worst_residual <= tolerance.
  void finalize();
};

struct ValidationReport {
  std::vector<CheckReport> checks;
  bool passed() const;
};

struct ValidationOptions {
  int samples = 100;
  unsigned long long seed = 0;
  double gradient_tol = 1e-6;
  double diagonal_tol = 1e-12;
};

/// Rank of A at sampled q, diagonal containment of phi_d, gradient check of L_d.
ValidationReport validate_system(const DiscreteLagrangian& L_d, const ConstraintDistribution& dist,
                                 const ValidationOptions& opts = {});

}  // namespace dirac
