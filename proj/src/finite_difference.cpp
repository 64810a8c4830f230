#include "dirac/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dirac::fd {

namespace {
const double kEps = std::numeric_limits<double>::epsilon();
}

double gradient_step(double x) { return std::cbrt(kEps) * std::max(1.0, std::abs(x)); }

double jacobian_step(double x) { return std::sqrt(kEps) * std::max(1.0, std::abs(x)); }

Vector central_gradient(const std::function<double(const Vector&)>& f, const Vector& x) {
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = gradient_step(x[i]);
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix central_jacobian(const std::function<Vector(const Vector&)>& F, const Vector& x,
                        double relative_step) {
  Matrix J;
  Vector xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = relative_step * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    const Vector fp = F(xp);
    xp[j] = x[j] - h;
    const Vector fm = F(xp);
    xp[j] = x[j];
    if (j == 0) J.resize(fp.size(), x.size());
    J.col(j) = (fp - fm) / (2.0 * h);
  }
  if (x.size() == 0) J.resize(F(x).size(), 0);
  return J;
}

Matrix central_jacobian(const std::function<Vector(const Vector&)>& F, const Vector& x) {
  return central_jacobian(F, x, std::sqrt(kEps));
}

Vector slot1_gradient(const ScalarFn2& f, const Vector& a, const Vector& b) {
  return central_gradient([&](const Vector& x) { return f(x, b); }, a);
}

Vector slot2_gradient(const ScalarFn2& f, const Vector& a, const Vector& b) {
  return central_gradient([&](const Vector& x) { return f(a, x); }, b);
}

double relative_gradient_error(const Vector& g, const Vector& g_fd) {
  if (g.size() != g_fd.size()) {
    throw DiracError(ErrorCode::kDimensionMismatch, "gradient length mismatch");
  }
  if (g.size() == 0) return 0.0;
  const double scale = std::max(1.0, g_fd.lpNorm<Eigen::Infinity>());
  return (g - g_fd).lpNorm<Eigen::Infinity>() / scale;
}

}  // namespace dirac::fd

namespace dirac {

Vector uniform_box(Rng& rng, Eigen::Index dim, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace dirac
