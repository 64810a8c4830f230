#include "dirac/geometry_maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dirac {

namespace {

bool same(const Vector& a, const Vector& b) { return a.size() == b.size() && a == b; }

Vector cat4(const Vector& a, const Vector& b, const Vector& c, const Vector& d) {
  Vector out(a.size() + b.size() + c.size() + d.size());
  out << a, b, c, d;
  return out;
}

void require_dims(Eigen::Index n, std::initializer_list<const Vector*> vs) {
  for (const Vector* v : vs) {
    if (v->size() != n) throw DiracError(ErrorCode::kDimensionMismatch, "slot dimensions differ");
  }
}

// Slot k of a stacked 4n vector.
Vector slot(const Vector& x, Eigen::Index n, int k) { return x.segment(k * n, n); }

}  // namespace

DoubleCotangentPoint::DoubleCotangentPoint(PhasePoint a, PhasePoint b) : z0(std::move(a)), z1(std::move(b)) {
  if (z0.dim() != z1.dim()) throw DiracError(ErrorCode::kDimensionMismatch, "z0 and z1 differ in dimension");
}

Vector DoubleCotangentPoint::stacked() const { return cat4(z0.q(), z0.p(), z1.q(), z1.p()); }

DoubleCotangentPoint DoubleCotangentPoint::from_stacked(const Vector& x) {
  if (x.size() % 4 != 0) throw DiracError(ErrorCode::kDimensionMismatch, "stacked length not divisible by 4");
  const Eigen::Index n = x.size() / 4;
  return {PhasePoint(slot(x, n, 0), slot(x, n, 1)), PhasePoint(slot(x, n, 2), slot(x, n, 3))};
}

bool DoubleCotangentPoint::operator==(const DoubleCotangentPoint& o) const {
  return same(z0.q(), o.z0.q()) && same(z0.p(), o.z0.p()) && same(z1.q(), o.z1.q()) && same(z1.p(), o.z1.p());
}

Vector CotangentOfProductPoint::stacked() const { return cat4(q0, q1, a0, a1); }
bool CotangentOfProductPoint::operator==(const CotangentOfProductPoint& o) const {
  return same(q0, o.q0) && same(q1, o.q1) && same(a0, o.a0) && same(a1, o.a1);
}

Vector CotangentOfHPlusPoint::stacked() const { return cat4(q0, p1, a, b); }
bool CotangentOfHPlusPoint::operator==(const CotangentOfHPlusPoint& o) const {
  return same(q0, o.q0) && same(p1, o.p1) && same(a, o.a) && same(b, o.b);
}

Vector CotangentOfHMinusPoint::stacked() const { return cat4(p0, q1, a, b); }
bool CotangentOfHMinusPoint::operator==(const CotangentOfHMinusPoint& o) const {
  return same(p0, o.p0) && same(q1, o.q1) && same(a, o.a) && same(b, o.b);
}

CotangentOfProductPoint kappa_d(const DoubleCotangentPoint& x) {
  return {x.z0.q(), x.z1.q(), -x.z0.p(), x.z1.p()};
}

DoubleCotangentPoint kappa_d_inv(const CotangentOfProductPoint& c) {
  require_dims(c.q0.size(), {&c.q1, &c.a0, &c.a1});
  return {PhasePoint(c.q0, -c.a0), PhasePoint(c.q1, c.a1)};
}

CotangentOfHPlusPoint omega_d_plus(const DoubleCotangentPoint& x) {
  return {x.z0.q(), x.z1.p(), x.z0.p(), x.z1.q()};
}

DoubleCotangentPoint omega_d_plus_inv(const CotangentOfHPlusPoint& c) {
  require_dims(c.q0.size(), {&c.p1, &c.a, &c.b});
  return {PhasePoint(c.q0, c.a), PhasePoint(c.b, c.p1)};
}

CotangentOfHMinusPoint omega_d_minus(const DoubleCotangentPoint& x) {
  return {x.z0.p(), x.z1.q(), -x.z0.q(), -x.z1.p()};
}

DoubleCotangentPoint omega_d_minus_inv(const CotangentOfHMinusPoint& c) {
  require_dims(c.p0.size(), {&c.q1, &c.a, &c.b});
  return {PhasePoint(-c.a, c.p0), PhasePoint(c.q1, -c.b)};
}

CotangentOfHPlusPoint gamma_d_plus(const CotangentOfProductPoint& c) {
  require_dims(c.q0.size(), {&c.q1, &c.a0, &c.a1});
  return {c.q0, c.a1, -c.a0, c.q1};
}

CotangentOfHMinusPoint gamma_d_minus(const CotangentOfProductPoint& c) {
  require_dims(c.q0.size(), {&c.q1, &c.a0, &c.a1});
  return {-c.a0, c.q1, -c.q0, -c.a1};
}

bool CotangentTangentPoint::operator==(const CotangentTangentPoint& o) const {
  return same(q, o.q) && same(dq, o.dq) && same(dp, o.dp) && same(p, o.p);
}

bool CotangentCotangentPoint::operator==(const CotangentCotangentPoint& o) const {
  return same(q, o.q) && same(p, o.p) && same(a, o.a) && same(b, o.b);
}

CotangentTangentPoint kappa_continuous(const TangentCotangentPoint& x) {
  require_dims(x.q.size(), {&x.p, &x.dq, &x.dp});
  return {x.q, x.dq, x.dp, x.p};
}

CotangentCotangentPoint omega_flat_continuous(const TangentCotangentPoint& x) {
  require_dims(x.q.size(), {&x.p, &x.dq, &x.dp});
  return {x.q, x.p, -x.dp, x.dq};
}

CotangentTangentPoint kappa_d_limit_quotient(const TangentCotangentPoint& x, double eps) {
  require_dims(x.q.size(), {&x.p, &x.dq, &x.dp});
  const PhasePoint z(x.q, x.p);
  const CotangentOfProductPoint diag = kappa_d({z, z});
  auto quotient = [&](double e) {
    const CotangentOfProductPoint c = kappa_d({z, PhasePoint(x.q + e * x.dq, x.p + e * x.dp)});
    return std::pair<Vector, Vector>{(c.q1 - diag.q1) / e, (c.a1 - diag.a1) / e};
  };
  const auto [dq_full, dp_full] = quotient(eps);
  const auto [dq_half, dp_half] = quotient(0.5 * eps);
  return {x.q, (4.0 * dq_half - dq_full) / 3.0, (4.0 * dp_half - dp_full) / 3.0, x.p};
}

DiscreteOneForms one_forms(int n) {
  const Eigen::Index d = 4 * static_cast<Eigen::Index>(n);
  // chart (q0, p0, q1, p1)
  OneForm lambda{"lambda_d", d, [n](const Vector& x, const Vector& v) {
                   return -slot(x, n, 1).dot(slot(v, n, 0)) + slot(x, n, 3).dot(slot(v, n, 2));
                 }};
  OneForm chi_plus{"chi_d+", d, [n](const Vector& x, const Vector& v) {
                     return slot(x, n, 1).dot(slot(v, n, 0)) + slot(x, n, 2).dot(slot(v, n, 3));
                   }};
  OneForm chi_minus{"chi_d-", d, [n](const Vector& x, const Vector& v) {
                      return -slot(x, n, 0).dot(slot(v, n, 1)) - slot(x, n, 3).dot(slot(v, n, 2));
                    }};
  DiscreteOneForms f{lambda, lambda, chi_plus, chi_minus, lambda, chi_plus, chi_minus};
  f.lambda_plus.name = "lambda_d+";
  f.lambda_minus.name = "lambda_d-";
  f.theta.name = "Theta";
  f.theta2.name = "Theta2";
  f.theta3.name = "Theta3";
  return f;
}

namespace {

// sum_k covector_k . d(base_k) on a (base0, base1, cov0, cov1) chart.
OneForm canonical_form(int n, std::string name) {
  return {std::move(name), 4 * static_cast<Eigen::Index>(n), [n](const Vector& x, const Vector& v) {
            return slot(x, n, 2).dot(slot(v, n, 0)) + slot(x, n, 3).dot(slot(v, n, 1));
          }};
}

}  // namespace

OneForm canonical_form_product(int n) { return canonical_form(n, "Theta_T*(QxQ)"); }
OneForm canonical_form_h_plus(int n) { return canonical_form(n, "Theta_T*H+"); }
OneForm canonical_form_h_minus(int n) { return canonical_form(n, "Theta_T*H-"); }

OneForm pullback_linear(const OneForm& omega, const LinearMap& F, Eigen::Index source_dim) {
  return {omega.name + " pulled back", source_dim,
          [omega, F](const Vector& x, const Vector& v) { return omega(F(x), F(v)); }};
}

LinearMap kappa_d_linear(int) {
  return [](const Vector& x) { return kappa_d(DoubleCotangentPoint::from_stacked(x)).stacked(); };
}

LinearMap omega_d_plus_linear(int) {
  return [](const Vector& x) { return omega_d_plus(DoubleCotangentPoint::from_stacked(x)).stacked(); };
}

LinearMap omega_d_minus_linear(int) {
  return [](const Vector& x) { return omega_d_minus(DoubleCotangentPoint::from_stacked(x)).stacked(); };
}

double exterior_derivative_2form(const OneForm& omega, const Vector& x, const Vector& v, const Vector& w) {
  if (x.size() != omega.dim || v.size() != omega.dim || w.size() != omega.dim) {
    throw DiracError(ErrorCode::kDimensionMismatch, "tangent vectors do not match the form's chart");
  }
  const double base = std::cbrt(std::numeric_limits<double>::epsilon()) *
                      std::max(1.0, x.lpNorm<Eigen::Infinity>());
  auto directional = [&](const Vector& dir, const Vector& arg) {
    const double scale = std::max(1.0, dir.lpNorm<Eigen::Infinity>());
    const double h = base / scale;
    return (omega(x + h * dir, arg) - omega(x - h * dir, arg)) / (2.0 * h);
  };
  return directional(v, w) - directional(w, v);
}

double canonical_two_form(int n, const Vector& v, const Vector& w) {
  const auto q0 = [&](const Vector& u) { return slot(u, n, 0); };
  const auto p0 = [&](const Vector& u) { return slot(u, n, 1); };
  const auto q1 = [&](const Vector& u) { return slot(u, n, 2); };
  const auto p1 = [&](const Vector& u) { return slot(u, n, 3); };
  return q1(v).dot(p1(w)) - p1(v).dot(q1(w)) - (q0(v).dot(p0(w)) - p0(v).dot(q0(w)));
}

double linearity_defect(const OneForm& omega, const Vector& x, const Vector& v, const Vector& w,
                        double a, double b) {
  return std::abs(omega(x, a * v + b * w) - a * omega(x, v) - b * omega(x, w));
}

}  // namespace dirac
