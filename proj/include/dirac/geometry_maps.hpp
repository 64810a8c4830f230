#pragma once

#include <functional>
#include <string>

#include "dirac/core_types.hpp"

namespace dirac {

/// ((q0, p0), (q1, p1)) in T*Q x T*Q.
struct DoubleCotangentPoint {
  PhasePoint z0;
  PhasePoint z1;

  DoubleCotangentPoint(PhasePoint a, PhasePoint b);

  Eigen::Index dim() const noexcept { return z0.dim(); }
  /// (q0, p0, q1, p1), the chart used by the one-forms below.
  Vector stacked() const;
  static DoubleCotangentPoint from_stacked(const Vector& x);

  bool operator==(const DoubleCotangentPoint& o) const;
};

/// (q0, q1, a0, a1) in T*(Q x Q): base (q0, q1), covector (a0, a1).
struct CotangentOfProductPoint {
  Vector q0, q1, a0, a1;
  Vector stacked() const;
  bool operator==(const CotangentOfProductPoint& o) const;
};

/// (q0, p1, a, b) in T*H_+: base (q0, p1), covector (a, b).
struct CotangentOfHPlusPoint {
  Vector q0, p1, a, b;
  Vector stacked() const;
  bool operator==(const CotangentOfHPlusPoint& o) const;
};

/// (p0, q1, a, b) in T*H_-: base (p0, q1), covector (a, b).
struct CotangentOfHMinusPoint {
  Vector p0, q1, a, b;
  Vector stacked() const;
  bool operator==(const CotangentOfHMinusPoint& o) const;
};

CotangentOfProductPoint kappa_d(const DoubleCotangentPoint& x);
DoubleCotangentPoint kappa_d_inv(const CotangentOfProductPoint& c);

CotangentOfHPlusPoint omega_d_plus(const DoubleCotangentPoint& x);
DoubleCotangentPoint omega_d_plus_inv(const CotangentOfHPlusPoint& c);

CotangentOfHMinusPoint omega_d_minus(const DoubleCotangentPoint& x);
DoubleCotangentPoint omega_d_minus_inv(const CotangentOfHMinusPoint& c);

/// omega_d_plus(kappa_d_inv(c)): (q0, q1, a0, a1) -> (q0, a1, -a0, q1).
CotangentOfHPlusPoint gamma_d_plus(const CotangentOfProductPoint& c);

/// omega_d_minus(kappa_d_inv(c)): (q0, q1, a0, a1) -> (-a0, q1, -q0, -a1).
CotangentOfHMinusPoint gamma_d_minus(const CotangentOfProductPoint& c);

// Continuous counterparts on TT*Q, with (q, p, dq, dp) a tangent vector at (q, p).

struct TangentCotangentPoint {
  Vector q, p, dq, dp;
};

/// (q, dq, dp, p) in T*TQ: base (q, dq), covector (dp, p).
struct CotangentTangentPoint {
  Vector q, dq, dp, p;
  bool operator==(const CotangentTangentPoint& o) const;
};

/// (q, p, a, b) in T*T*Q: base (q, p), covector (a, b).
struct CotangentCotangentPoint {
  Vector q, p, a, b;
  bool operator==(const CotangentCotangentPoint& o) const;
};

CotangentTangentPoint kappa_continuous(const TangentCotangentPoint& x);
CotangentCotangentPoint omega_flat_continuous(const TangentCotangentPoint& x);

/// Recovers kappa_continuous from kappa_d as eps -> 0: applies kappa_d to
/// ((q, p), (q + eps dq, p + eps dp)), subtracts the diagonal image and divides
/// by eps, with one Richardson extrapolation (eps, eps/2).
CotangentTangentPoint kappa_d_limit_quotient(const TangentCotangentPoint& x, double eps);

/// A one-form in a flat chart: eval(x, v) is linear in the tangent v.
struct OneForm {
  std::string name;
  Eigen::Index dim = 0;
  std::function<double(const Vector&, const Vector&)> eval;

  double operator()(const Vector& x, const Vector& v) const { return eval(x, v); }
};

/// Coordinate one-forms on T*Q x T*Q in the (q0, p0, q1, p1) chart.
struct DiscreteOneForms {
  OneForm lambda_plus;   // -p0 dq0 + p1 dq1
  OneForm lambda_minus;  // same as lambda_plus
  OneForm chi_plus;      //  p0 dq0 + q1 dp1
  OneForm chi_minus;     // -q0 dp0 - p1 dq1
  OneForm theta;         // = lambda
  OneForm theta2;        // = chi_plus
  OneForm theta3;        // = chi_minus
};

DiscreteOneForms one_forms(int n);

/// Canonical one-forms of the target cotangent bundles, each in its
/// (base, covector) chart: sum over slots of covector . d(base).
OneForm canonical_form_product(int n);
OneForm canonical_form_h_plus(int n);
OneForm canonical_form_h_minus(int n);

using LinearMap = std::function<Vector(const Vector&)>;

/// F* omega for a linear coordinate map F, whose differential is F itself.
OneForm pullback_linear(const OneForm& omega, const LinearMap& F, Eigen::Index source_dim);

/// The three discrete bundle maps acting on stacked (q0, p0, q1, p1) vectors.
LinearMap kappa_d_linear(int n);
LinearMap omega_d_plus_linear(int n);
LinearMap omega_d_minus_linear(int n);

/// d omega (v, w) = D_v[omega(., w)](x) - D_w[omega(., v)](x) by central
/// differences, with v and w extended as constant fields.
double exterior_derivative_2form(const OneForm& omega, const Vector& x, const Vector& v, const Vector& w);

/// dq1 ^ dp1 - dq0 ^ dp0 evaluated on (v, w) in the (q0, p0, q1, p1) chart.
double canonical_two_form(int n, const Vector& v, const Vector& w);

/// Linearity defect |omega(x, a v + b w) - a omega(x, v) - b omega(x, w)|.
double linearity_defect(const OneForm& omega, const Vector& x, const Vector& v, const Vector& w,
                        double a, double b);

}  // namespace dirac
