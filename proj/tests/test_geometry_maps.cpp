#include <doctest.h>

#include <cmath>

#include "dirac/finite_difference.hpp"
#include "dirac/geometry_maps.hpp"
#include "test_helpers.hpp"

using namespace dirac;
using dirac::test::vec;

namespace {

DoubleCotangentPoint point_1234() { return {PhasePoint(vec({1}), vec({2})), PhasePoint(vec({3}), vec({4}))}; }

DoubleCotangentPoint random_point(Rng& rng, int n) {
  return {PhasePoint(uniform_box(rng, n, -3, 3), uniform_box(rng, n, -3, 3)),
          PhasePoint(uniform_box(rng, n, -3, 3), uniform_box(rng, n, -3, 3))};
}

}  // namespace

TEST_CASE("kappa_d coordinates") {
  const CotangentOfProductPoint c = kappa_d(point_1234());
  CHECK(c.stacked() == vec({1, 3, -2, 4}));
  const DoubleCotangentPoint diag{PhasePoint(vec({0.7}), vec({0})), PhasePoint(vec({0.7}), vec({0}))};
  CHECK(kappa_d(diag).stacked() == vec({0.7, 0.7, 0, 0}));
}

TEST_CASE("omega_d_plus and omega_d_minus coordinates") {
  CHECK(omega_d_plus(point_1234()).stacked() == vec({1, 4, 2, 3}));
  const DoubleCotangentPoint d{PhasePoint(vec({1}), vec({2})), PhasePoint(vec({1}), vec({2}))};
  CHECK(omega_d_plus(d).stacked() == vec({1, 2, 2, 1}));
  CHECK(omega_d_minus(point_1234()).stacked() == vec({2, 3, -1, -4}));
  const DoubleCotangentPoint o{PhasePoint(vec({0}), vec({0})), PhasePoint(vec({0}), vec({0}))};
  CHECK(omega_d_minus(o).stacked() == vec({0, 0, 0, 0}));
}

TEST_CASE("discrete bundle maps invert exactly") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const DoubleCotangentPoint x = random_point(rng, 1 + i % 3);
    CHECK(kappa_d_inv(kappa_d(x)) == x);
    CHECK(omega_d_plus_inv(omega_d_plus(x)) == x);
    CHECK(omega_d_minus_inv(omega_d_minus(x)) == x);
  }
}

TEST_CASE("gamma maps compose kappa_d with the omega maps") {
  // hand composition: kappa_d((1,2),(3,4)) = (1,3,-2,4)
  const CotangentOfProductPoint c{vec({1}), vec({3}), vec({-2}), vec({4})};
  CHECK(gamma_d_plus(c).stacked() == vec({1, 4, 2, 3}));
  CHECK(gamma_d_minus(c).stacked() == vec({2, 3, -1, -4}));

  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const DoubleCotangentPoint x = random_point(rng, 1 + i % 3);
    CHECK(gamma_d_plus(kappa_d(x)) == omega_d_plus(x));
    CHECK(gamma_d_minus(kappa_d(x)) == omega_d_minus(x));
  }
}

TEST_CASE("gamma_d_plus applied to the Lagrangian differential") {
  const Vector q0 = vec({0.3}), q1 = vec({-0.4}), D1 = vec({1.5}), D2 = vec({-2.5});
  const CotangentOfHPlusPoint g = gamma_d_plus({q0, q1, D1, D2});
  CHECK(g.q0 == q0);
  CHECK(g.p1 == D2);
  CHECK(g.a == -D1);
  CHECK(g.b == q1);
}

TEST_CASE("continuous kappa and omega flat") {
  const TangentCotangentPoint x{vec({1}), vec({2}), vec({3}), vec({4})};
  const CotangentCotangentPoint w = omega_flat_continuous(x);
  CHECK(w == CotangentCotangentPoint{vec({1}), vec({2}), vec({-4}), vec({3})});
  const CotangentTangentPoint k = kappa_continuous(x);
  CHECK(k == CotangentTangentPoint{vec({1}), vec({3}), vec({4}), vec({2})});
}

TEST_CASE("kappa_d difference quotient recovers kappa") {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const TangentCotangentPoint x{uniform_box(rng, 2), uniform_box(rng, 2), uniform_box(rng, 2), uniform_box(rng, 2)};
    const CotangentTangentPoint lim = kappa_d_limit_quotient(x, 1e-6);
    const CotangentTangentPoint exact = kappa_continuous(x);
    CHECK((lim.dq - exact.dq).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((lim.dp - exact.dp).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK(lim.q == exact.q);
    CHECK(lim.p == exact.p);
  }
}

TEST_CASE("one-form coordinate values") {
  const DiscreteOneForms f = one_forms(1);
  const Vector x = point_1234().stacked();
  CHECK(f.chi_plus(x, vec({1, 0, 0, 0})) == 2.0);
  CHECK(f.chi_plus(x, vec({0, 0, 0, 1})) == 3.0);
  CHECK(f.lambda_plus(x, vec({0, 0, 0, 0})) == 0.0);
  CHECK(f.lambda_plus(x, vec({1, 0, 1, 0})) == -2.0 + 4.0);
  CHECK(f.chi_minus(x, vec({0, 1, 1, 0})) == -1.0 - 4.0);
}

TEST_CASE("chi_plus + lambda_plus equals d(q1 p1)") {
  Rng rng(4);
  for (int n = 1; n <= 3; ++n) {
    const DiscreteOneForms f = one_forms(n);
    for (int i = 0; i < 30; ++i) {
      const Vector x = uniform_box(rng, 4 * n), v = uniform_box(rng, 4 * n);
      auto g = [n](const Vector& y) { return y.segment(2 * n, n).dot(y.segment(3 * n, n)); };
      const double fd_dir = fd::central_gradient(g, x).dot(v);
      CHECK(std::abs(f.chi_plus(x, v) + f.lambda_plus(x, v) - fd_dir) <= 1e-8);
    }
  }
}

TEST_CASE("one-forms are linear in the tangent slot") {
  Rng rng(5);
  for (int n = 1; n <= 3; ++n) {
    const DiscreteOneForms f = one_forms(n);
    for (const OneForm* w : {&f.lambda_plus, &f.lambda_minus, &f.chi_plus, &f.chi_minus, &f.theta, &f.theta2, &f.theta3}) {
      const Vector x = uniform_box(rng, 4 * n), v = uniform_box(rng, 4 * n), u = uniform_box(rng, 4 * n);
      CHECK(linearity_defect(*w, x, v, u, 1.7, -0.3) <= 1e-10);
    }
  }
}

TEST_CASE("pullback of the canonical forms") {
  Rng rng(6);
  for (int n = 1; n <= 3; ++n) {
    const DiscreteOneForms f = one_forms(n);
    const OneForm lambda_pb = pullback_linear(canonical_form_product(n), kappa_d_linear(n), 4 * n);
    const OneForm chi_plus_pb = pullback_linear(canonical_form_h_plus(n), omega_d_plus_linear(n), 4 * n);
    const OneForm chi_minus_pb = pullback_linear(canonical_form_h_minus(n), omega_d_minus_linear(n), 4 * n);
    for (int i = 0; i < 100; ++i) {
      const Vector x = uniform_box(rng, 4 * n), v = uniform_box(rng, 4 * n);
      CHECK(std::abs(lambda_pb(x, v) - f.lambda_plus(x, v)) <= 1e-12);
      CHECK(std::abs(chi_plus_pb(x, v) - f.chi_plus(x, v)) <= 1e-12);
      CHECK(std::abs(chi_minus_pb(x, v) - f.chi_minus(x, v)) <= 1e-12);
    }
  }
}

TEST_CASE("exterior derivatives agree with the canonical two-form") {
  Rng rng(7);
  for (int n = 1; n <= 3; ++n) {
    const DiscreteOneForms f = one_forms(n);
    const Eigen::Index d = 4 * n;
    const Vector x = uniform_box(rng, d);
    Vector v = Vector::Zero(d), w = Vector::Zero(d);
    v[2 * n] = 1.0;  // e_{q1}
    w[3 * n] = 1.0;  // e_{p1}
    CHECK(std::abs(exterior_derivative_2form(f.chi_plus, x, v, w) - 1.0) <= 1e-6);
    CHECK(std::abs(exterior_derivative_2form(f.chi_plus, x, v, v)) <= 1e-10);

    for (int i = 0; i < 100; ++i) {
      const Vector y = uniform_box(rng, d), a = uniform_box(rng, d), b = uniform_box(rng, d);
      const double omega = canonical_two_form(n, a, b);
      CHECK(std::abs(-exterior_derivative_2form(f.lambda_plus, y, a, b) - omega) <= 1e-6);
      CHECK(std::abs(-exterior_derivative_2form(f.lambda_minus, y, a, b) - omega) <= 1e-6);
      CHECK(std::abs(exterior_derivative_2form(f.chi_plus, y, a, b) - omega) <= 1e-6);
      CHECK(std::abs(exterior_derivative_2form(f.chi_minus, y, a, b) - omega) <= 1e-6);
    }
  }
}

TEST_CASE("dimension checks") {
  CHECK_THROWS_AS(DoubleCotangentPoint(PhasePoint(vec({1}), vec({2})), PhasePoint(vec({1, 2}), vec({3, 4}))),
                  DiracError);
  CHECK_THROWS_AS(gamma_d_plus({vec({1}), vec({1, 2}), vec({1}), vec({1})}), DiracError);
  CHECK_THROWS_AS(DoubleCotangentPoint::from_stacked(vec({1, 2, 3})), DiracError);
}
