#pragma once

#include <functional>
#include <random>

#include "dirac/core_types.hpp"

namespace dirac::fd {

/// eps^(1/3) * max(1, |x|): central-difference step for first derivatives.
double gradient_step(double x);

/// sqrt(eps) * max(1, |x|): step used for Jacobians of residuals.
double jacobian_step(double x);

Vector central_gradient(const std::function<double(const Vector&)>& f, const Vector& x);

/// Central-difference Jacobian with per-coordinate jacobian_step.
Matrix central_jacobian(const std::function<Vector(const Vector&)>& F, const Vector& x);

/// Same, with an explicit relative step factor in place of sqrt(eps).
Matrix central_jacobian(const std::function<Vector(const Vector&)>& F, const Vector& x,
                        double relative_step);

/// Slot-wise central gradients of a two-slot scalar function.
Vector slot1_gradient(const ScalarFn2& f, const Vector& a, const Vector& b);
Vector slot2_gradient(const ScalarFn2& f, const Vector& a, const Vector& b);

/// ||g - g_fd||_inf / max(1, ||g_fd||_inf).
double relative_gradient_error(const Vector& g, const Vector& g_fd);

}  // namespace dirac::fd

namespace dirac {

using Rng = std::mt19937_64;

/// Uniform sample in [lo, hi]^dim.
Vector uniform_box(Rng& rng, Eigen::Index dim, double lo = -1.0, double hi = 1.0);

}  // namespace dirac
