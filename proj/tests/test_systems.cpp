#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dirac/finite_difference.hpp"
#include "dirac/integrators.hpp"
#include "dirac/systems.hpp"
#include "test_helpers.hpp"

using namespace dirac;
using dirac::test::inf_norm;
using dirac::test::vec;

namespace {

// Action of the unit harmonic oscillator along the exact path with q(0) = q0,
// q(h) = q1, by composite Gauss-Legendre quadrature (5 nodes, 40 panels).
double exact_ho_action(double q0, double q1, double h) {
  const double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640, 0.9061798459386640};
  const double weights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                             0.2369268850561891};
  const double sh = std::sin(h);
  auto lagrangian = [&](double t) {
    const double q = (q0 * std::sin(h - t) + q1 * std::sin(t)) / sh;
    const double v = (-q0 * std::cos(h - t) + q1 * std::cos(t)) / sh;
    return 0.5 * v * v - 0.5 * q * q;
  };
  const int panels = 40;
  const double w = h / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 0.5) * w;
    for (int i = 0; i < 5; ++i) sum += 0.5 * w * weights[i] * lagrangian(mid + 0.5 * w * nodes[i]);
  }
  return sum;
}

double one_step_error(double h) {
  const ContinuousSystem sys = catalog("harmonic_oscillator");
  const PhasePoint z(vec({1}), vec({0}));
  const PhasePoint approx = step_del(discretize(sys, {QuadratureKind::kMidpoint, h}), z).next;
  return inf_norm(approx.stacked() - (*sys.exact_flow)(z, h).stacked());
}

}  // namespace

TEST_CASE("midpoint and trapezoidal discretizations") {
  const ContinuousSystem fp = catalog("free_particle");
  Rng rng(1);
  for (double h : {0.1, 0.5}) {
    const DiscreteLagrangian mid = discretize(fp, {QuadratureKind::kMidpoint, h});
    const DiscreteLagrangian trap = discretize(fp, {QuadratureKind::kTrapezoidal, h});
    for (int i = 0; i < 20; ++i) {
      const Vector a = uniform_box(rng, 1), b = uniform_box(rng, 1);
      const double expected = (b - a).squaredNorm() / (2 * h);
      CHECK(std::abs(mid(a, b) - expected) <= 1e-13);
      CHECK(std::abs(trap(a, b) - mid(a, b)) <= 1e-13);
    }
  }
  const DiscreteLagrangian ho = discretize(catalog("harmonic_oscillator"), {QuadratureKind::kMidpoint, 0.1});
  CHECK(std::abs(ho(vec({1}), vec({1})) + 0.05) <= 1e-15);
}

TEST_CASE("quadrature rule validation and names") {
  CHECK_THROWS_AS((QuadratureRule{QuadratureKind::kMidpoint, 0.0}).validate(), DiracError);
  CHECK_THROWS_AS((QuadratureRule{QuadratureKind::kMidpoint, -1.0}).validate(), DiracError);
  CHECK(parse_quadrature("trapezoidal") == QuadratureKind::kTrapezoidal);
  CHECK(std::string(to_string(QuadratureKind::kMidpoint)) == "midpoint");
  CHECK_THROWS_AS(parse_quadrature("simpson"), DiracError);
}

TEST_CASE("catalog entries") {
  const ContinuousSystem ho = catalog("harmonic_oscillator");
  const PhasePoint quarter = (*ho.exact_flow)(PhasePoint(vec({1}), vec({0})), std::numbers::pi / 2);
  CHECK(std::abs(quarter.q()[0]) <= 1e-15);
  CHECK(std::abs(quarter.p()[0] + 1.0) <= 1e-15);

  const ContinuousSystem pend = catalog("pendulum");
  CHECK(pend.energy(vec({0}), vec({0})) == -1.0);
  CHECK(pend.L(vec({0}), vec({2})) == doctest::Approx(3.0));

  const ContinuousSystem nh = catalog("nonholonomic_particle");
  CHECK(nh.n == 3);
  REQUIRE(nh.constraint.has_value());
  CHECK(nh.constraint->A(vec({0, 1, 0})) == Matrix{{-1, 0, 1}});
  CHECK(nh.constraint->phi_mode() == PhiMode::kMidpoint);
  CHECK(catalog("nonholonomic_particle", {{"phi_mode_left", 1}}).constraint->phi_mode() == PhiMode::kLeft);

  const ContinuousSystem fp = catalog("free_particle", {{"n", 4}});
  CHECK(fp.n == 4);
  CHECK_FALSE(fp.constraint.has_value());

  try {
    catalog("double_pendulum");
    FAIL("expected UnknownSystem");
  } catch (const DiracError& e) {
    CHECK(e.code() == ErrorCode::kUnknownSystem);
  }
  CHECK_THROWS_AS(catalog("harmonic_oscillator", {{"mass", -1}}), DiracError);
  CHECK(catalog_names().size() == 4);
}

TEST_CASE("catalog energies are the Legendre transform of L") {
  for (const std::string& name : catalog_names()) {
    CHECK_MESSAGE(energy_consistency_error(catalog(name), 50) <= 1e-10, name);
    CHECK_MESSAGE(lagrangian_gradient_error(catalog(name), 50) <= 1e-6, name);
  }
  CHECK(energy_consistency_error(catalog("harmonic_oscillator", {{"mass", 2.0}, {"omega", 3.0}}), 50) <= 1e-10);
}

TEST_CASE("separable systems") {
  const ContinuousSystem s =
      make_separable_system("custom", {vec({1.0, 2.0}), PotentialKind::kQuadratic, vec({3.0, 4.0})});
  CHECK(s.n == 2);
  CHECK(s.L(vec({1, 1}), vec({1, 1})) == doctest::Approx(0.5 * (1 + 2) - 0.5 * (3 + 4)));
  CHECK(energy_consistency_error(s, 30) <= 1e-10);
  CHECK_THROWS_AS(make_separable_system("bad", {vec({0.0}), PotentialKind::kNone, Vector()}), DiracError);
}

TEST_CASE("midpoint one-step error is third order") {
  const double ratio = one_step_error(0.1) / one_step_error(0.05);
  CHECK(ratio >= 7.0);
  CHECK(ratio <= 9.0);
}

TEST_CASE("exact discrete Lagrangian reproduces the exact flow") {
  const double h = 0.3;
  const DiscreteLagrangian exact = make_finite_difference_lagrangian(
      1, [h](const Vector& a, const Vector& b) { return exact_ho_action(a[0], b[0], h); });
  const ContinuousSystem ho = catalog("harmonic_oscillator");
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const PhasePoint z(uniform_box(rng, 1), uniform_box(rng, 1));
    NewtonOptions loose;  // FD slot derivatives carry ~1e-11 noise
    loose.tol = 1e-10;
    const PhasePoint next = step_del(exact, z, loose).next;
    CHECK(inf_norm(next.stacked() - (*ho.exact_flow)(z, h).stacked()) <= 1e-8);
  }
  // and midpoint agrees with it to the expected O(h^3) per step
  const DiscreteLagrangian mid = discretize(ho, {QuadratureKind::kMidpoint, h});
  const PhasePoint z(vec({1}), vec({0}));
  CHECK(inf_norm(step_del(mid, z).next.stacked() - step_del(exact, z, {1e-10}).next.stacked()) <= 0.1 * h * h * h);
}
