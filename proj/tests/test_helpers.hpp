#pragma once

#include <initializer_list>

#include "dirac/core_types.hpp"

namespace dirac::test {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

// L_d = (q1 - q0)^2 / (2h) with analytic slots.
inline DiscreteLagrangian free_particle_ld(int n, double h) {
  return make_analytic_lagrangian(
      n, [h](const Vector& a, const Vector& b) { return (b - a).squaredNorm() / (2.0 * h); },
      [h](const Vector& a, const Vector& b) -> Vector { return -(b - a) / h; },
      [h](const Vector& a, const Vector& b) -> Vector { return (b - a) / h; });
}

}  // namespace dirac::test
