#include <doctest.h>

#include <cmath>

#include "dirac/newton.hpp"
#include "test_helpers.hpp"

using namespace dirac;
using dirac::test::vec;

namespace {

double bisection(double (*f)(double), double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) < 0) == (f(mid) < 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("linear residual converges in one iteration") {
  const NewtonResult r = newton_solve([](const Vector& u) -> Vector { return u - vec({3.0}); }, std::nullopt, vec({0.0}));
  CHECK(r.iters == 1);
  CHECK(std::abs(r.u[0] - 3.0) <= 1e-12);
  CHECK(r.residual_norm <= 1e-12);
}

TEST_CASE("cube root against a bisection oracle") {
  const double oracle = bisection([](double u) { return u * u * u - 2.0; }, 0.0, 2.0);
  const NewtonResult r = newton_solve(
      [](const Vector& u) -> Vector { return vec({u[0] * u[0] * u[0] - 2.0}); }, std::nullopt, vec({1.0}));
  CHECK(std::abs(r.u[0] - oracle) <= 1e-12);
  CHECK(std::abs(r.u[0] - 1.259921049) <= 1e-9);
}

TEST_CASE("analytic Jacobian is used when supplied") {
  int jac_calls = 0;
  const JacobianFn jac = [&](const Vector& u) {
    ++jac_calls;
    return Matrix::Constant(1, 1, 3.0 * u[0] * u[0]);
  };
  const NewtonResult r =
      newton_solve([](const Vector& u) -> Vector { return vec({u[0] * u[0] * u[0] - 2.0}); }, jac, vec({1.0}));
  CHECK(jac_calls >= r.iters);
  CHECK(std::abs(r.u[0] - std::cbrt(2.0)) <= 1e-12);
}

TEST_CASE("degenerate root is slow: converges or reports NoConvergence") {
  const ResidualFn f = [](const Vector& u) -> Vector { return vec({u[0] * u[0]}); };
  try {
    const NewtonResult r = newton_solve(f, std::nullopt, vec({1.0}));
    CHECK(r.residual_norm <= 1e-12);
    CHECK(r.iters <= 50);
  } catch (const NoConvergence& e) {
    CHECK(e.iters() <= 50);
  }
}

TEST_CASE("iteration cap raises NoConvergence with the final norm") {
  NewtonOptions opts;
  opts.max_iters = 2;
  try {
    newton_solve([](const Vector& u) -> Vector { return vec({std::exp(u[0]) - 1e6}); }, std::nullopt, vec({0.0}),
                 opts);
    FAIL("expected NoConvergence");
  } catch (const NoConvergence& e) {
    CHECK(e.code() == ErrorCode::kNoConvergence);
    CHECK(e.iters() == 2);
    CHECK(e.final_norm() > 1e-12);
  }
}

TEST_CASE("singular Jacobian is reported") {
  const ResidualFn f = [](const Vector& u) -> Vector { return vec({u[0] + u[1], u[0] + u[1] - 1.0}); };
  try {
    newton_solve(f, std::nullopt, vec({0.0, 0.0}));
    FAIL("expected a singular Jacobian");
  } catch (const NoConvergence&) {
    FAIL("wrong error class");
  } catch (const DiracError& e) {
    CHECK(e.code() == ErrorCode::kSingularJacobian);
  }
}

TEST_CASE("halving damping rescues a residual on which plain Newton diverges") {
  const ResidualFn f = [](const Vector& u) -> Vector { return vec({std::atan(u[0])}); };
  NewtonOptions plain;
  plain.damping = Damping::kNone;
  // the iterates overshoot until the Jacobian underflows or the cap is hit
  CHECK_THROWS_AS(newton_solve(f, std::nullopt, vec({3.0}), plain), DiracError);
  const NewtonResult r = newton_solve(f, std::nullopt, vec({3.0}));
  CHECK(std::abs(r.u[0]) <= 1e-12);
}

TEST_CASE("options are validated") {
  NewtonOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), DiracError);
  bad = {};
  bad.max_iters = 0;
  CHECK_THROWS_AS(bad.validate(), DiracError);
}

TEST_CASE("condition number") {
  CHECK(condition_number(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(std::isinf(condition_number(Matrix::Zero(2, 2))));
  CHECK(condition_number(Matrix{{1, 0}, {0, 1e-3}}) == doctest::Approx(1e3));
}
