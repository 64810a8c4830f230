#include "dirac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dirac/finite_difference.hpp"
#include "dirac/geometry_maps.hpp"

namespace dirac {

nlohmann::json to_json(const CheckReport& r) {
  return {{"name", r.name},           {"pass", r.pass},       {"worst_residual", r.worst_residual},
          {"tolerance", r.tolerance}, {"samples", r.samples}, {"details", r.details}};
}

CheckReport check_report_from_json(const nlohmann::json& j) {
  CheckReport r;
  r.name = j.at("name").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  r.worst_residual = j.at("worst_residual").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.samples = j.at("samples").get<int>();
  r.details = j.at("details").get<std::string>();
  return r;
}

Matrix canonical_symplectic_matrix(Eigen::Index n) {
  Matrix J = Matrix::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = Matrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return J;
}

Matrix step_jacobian(const Stepper& stepper, const PhasePoint& z) {
  auto F = [&](const Vector& x) { return stepper(PhasePoint::from_stacked(x), {}).next.stacked(); };
  return fd::central_jacobian(F, z.stacked());
}

namespace {

double norm_inf(const Vector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

double max_abs(const Matrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

// Keeps the worst residual and a note on where it occurred.
struct Worst {
  double value = 0.0;
  std::string where;

  void update(double v, const std::string& label) {
    if (!(v <= value)) {
      value = v;
      where = label;
    }
  }
};

CheckReport make_report(std::string name, const Worst& worst, double tol, int samples, std::string details = "") {
  CheckReport r;
  r.name = std::move(name);
  r.worst_residual = worst.value;
  r.tolerance = tol;
  r.samples = samples;
  r.details = details.empty() ? (worst.where.empty() ? "" : "worst at " + worst.where) : std::move(details);
  r.finalize();
  return r;
}

}  // namespace

CheckReport check_symplectic(const Stepper& stepper, const std::vector<PhasePoint>& samples, double tol) {
  Worst worst;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Matrix DF = step_jacobian(stepper, samples[s]);
    const Matrix J = canonical_symplectic_matrix(samples[s].dim());
    worst.update(max_abs(DF.transpose() * J * DF - J), "sample " + std::to_string(s));
  }
  return make_report("symplectic", worst, tol, static_cast<int>(samples.size()));
}

CheckReport check_generating_function(GeneratingFunctionType type, const Stepper& stepper,
                                      const TwoSlotFunction& S, const std::vector<PhasePoint>& samples,
                                      double tol) {
  Worst worst;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const PhasePoint& z0 = samples[s];
    const PhasePoint z1 = stepper(z0, {}).next;
    const Vector &q0 = z0.q(), &p0 = z0.p(), &q1 = z1.q(), &p1 = z1.p();
    double r = 0.0;
    switch (type) {
      case GeneratingFunctionType::kType1:
        r = std::max(norm_inf(p0 + S.d1(q0, q1)), norm_inf(p1 - S.d2(q0, q1)));
        break;
      case GeneratingFunctionType::kType2:
        r = std::max(norm_inf(p0 - S.d1(q0, p1)), norm_inf(q1 - S.d2(q0, p1)));
        break;
      case GeneratingFunctionType::kType3:
        r = std::max(norm_inf(q0 + S.d1(p0, q1)), norm_inf(p1 + S.d2(p0, q1)));
        break;
    }
    worst.update(r, "sample " + std::to_string(s));
  }
  return make_report("genfunc" + std::to_string(static_cast<int>(type)), worst, tol,
                     static_cast<int>(samples.size()));
}

double annihilator_projection_residual(const Matrix& A, const Vector& v) {
  if (A.rows() == 0) return norm_inf(v);
  if (!has_full_row_rank(A)) {
    throw DiracError(ErrorCode::kRankDeficientConstraint, "A(q) is rank deficient in the membership projector");
  }
  const Matrix gram = A * A.transpose();
  const Vector coeffs = gram.ldlt().solve(A * v);
  return norm_inf(v - A.transpose() * coeffs);
}

namespace {

// Slot differences alpha - beta in T*H_{+-}: momentum-type slots carry a
// membership at the named base point, position-type slots must vanish.
struct MembershipSlots {
  Vector at_q0;      // momentum-type, annihilator at q_k
  Vector at_q1;      // momentum-type, annihilator at q_{k+1}
  Vector vanishing;  // position-type slots, stacked
};

CheckReport run_membership(const std::string& name, const ConstraintDistribution& dist, const Trajectory& traj,
                           double tol,
                           const std::function<MembershipSlots(std::size_t k, const PhasePoint&, const PhasePoint&)>&
                               slots_at) {
  Worst worst;
  for (std::size_t k = 0; k + 1 < traj.points.size(); ++k) {
    const PhasePoint& z0 = traj.points[k];
    const PhasePoint& z1 = traj.points[k + 1];
    const MembershipSlots s = slots_at(k, z0, z1);
    const std::string at = "step " + std::to_string(k);
    worst.update(norm_inf(dist.phi_d(z0.q(), z1.q())), at + " (phi_d)");
    worst.update(annihilator_projection_residual(dist.A(z0.q()), s.at_q0), at + " (annihilator at q_k)");
    worst.update(annihilator_projection_residual(dist.A(z1.q()), s.at_q1), at + " (annihilator at q_k+1)");
    worst.update(norm_inf(s.vanishing), at + " (position slots)");
  }
  const int steps = traj.points.empty() ? 0 : static_cast<int>(traj.points.size() - 1);
  return make_report(name, worst, tol, steps);
}

Vector cat(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

CheckReport check_dirac_membership(Side side, const DiscreteLagrangian& L_d, const ConstraintDistribution& dist,
                                   const Trajectory& traj, double tol) {
  const std::string name = std::string("dirac_lagrangian_") + to_string(side);
  return run_membership(name, dist, traj, tol, [&](std::size_t, const PhasePoint& z0, const PhasePoint& z1) {
    const CotangentOfProductPoint dL{z0.q(), z1.q(), L_d.d1(z0.q(), z1.q()), L_d.d2(z0.q(), z1.q())};
    const DoubleCotangentPoint X(z0, z1);
    if (side == Side::kPlus) {
      // (q0, p1 | p0, q1)
      const CotangentOfHPlusPoint a = gamma_d_plus(dL);
      const CotangentOfHPlusPoint b = omega_d_plus(X);
      return MembershipSlots{a.a - b.a, a.p1 - b.p1, cat(a.q0 - b.q0, a.b - b.b)};
    }
    // (p0, q1 | -q0, -p1)
    const CotangentOfHMinusPoint a = gamma_d_minus(dL);
    const CotangentOfHMinusPoint b = omega_d_minus(X);
    return MembershipSlots{a.p0 - b.p0, a.b - b.b, cat(a.q1 - b.q1, a.a - b.a)};
  });
}

CheckReport check_dirac_membership(const DiscreteHamiltonianPlus& H, const ConstraintDistribution& dist,
                                   const Trajectory& traj, double tol) {
  return run_membership("dirac_hamiltonian_plus", dist, traj, tol,
                        [&](std::size_t, const PhasePoint& z0, const PhasePoint& z1) {
                          const Vector& pt = z1.p();
                          const CotangentOfHPlusPoint a{z0.q(), pt, H.d1(z0.q(), pt), H.d2(z0.q(), pt)};
                          const CotangentOfHPlusPoint b = omega_d_plus(DoubleCotangentPoint(z0, z1));
                          return MembershipSlots{a.a - b.a, a.p1 - b.p1, cat(a.q0 - b.q0, a.b - b.b)};
                        });
}

CheckReport check_dirac_membership(const DiscreteHamiltonianMinus& H, const ConstraintDistribution& dist,
                                   const Trajectory& traj, double tol) {
  return run_membership("dirac_hamiltonian_minus", dist, traj, tol,
                        [&](std::size_t k, const PhasePoint& z0, const PhasePoint& z1) {
                          Vector pt = z0.p();
                          if (dist.m() > 0 && k < traj.diagnostics.size() &&
                              traj.diagnostics[k].multipliers.size() == dist.m()) {
                            pt -= dist.A(z0.q()).transpose() * traj.diagnostics[k].multipliers;
                          }
                          const CotangentOfHMinusPoint a{pt, z1.q(), H.d1(pt, z1.q()), H.d2(pt, z1.q())};
                          const CotangentOfHMinusPoint b = omega_d_minus(DoubleCotangentPoint(z0, z1));
                          return MembershipSlots{a.p0 - b.p0, a.b - b.b, cat(a.q1 - b.q1, a.a - b.a)};
                        });
}

CheckReport check_gradient(const ScalarFn& f, const GradientFn& grad, const std::vector<Vector>& samples,
                           double tol) {
  Worst worst;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    worst.update(fd::relative_gradient_error(grad(samples[s]), fd::central_gradient(f, samples[s])),
                 "sample " + std::to_string(s));
  }
  return make_report("gradient", worst, tol, static_cast<int>(samples.size()));
}

CheckReport check_slot_gradients(const std::string& name, const TwoSlotFunction& f, int samples, double tol,
                                 unsigned long long seed) {
  Rng rng(seed);
  Worst worst;
  for (int s = 0; s < samples; ++s) {
    const Vector a = uniform_box(rng, f.n);
    const Vector b = uniform_box(rng, f.n);
    worst.update(fd::relative_gradient_error(f.d1(a, b), fd::slot1_gradient(f.eval, a, b)),
                 "sample " + std::to_string(s) + " (slot 1)");
    worst.update(fd::relative_gradient_error(f.d2(a, b), fd::slot2_gradient(f.eval, a, b)),
                 "sample " + std::to_string(s) + " (slot 2)");
  }
  return make_report(name, worst, tol, samples);
}

double EnergyMomentumSeries::max_energy_deviation() const {
  double worst = 0.0;
  for (const double e : energy) worst = std::max(worst, std::abs(e - energy.front()));
  return worst;
}

double EnergyMomentumSeries::drift_slope() const {
  const std::size_t N = energy.size();
  if (N < 2) return 0.0;
  const double kbar = 0.5 * static_cast<double>(N - 1);
  double ebar = 0.0;
  for (const double e : energy) ebar += e;
  ebar /= static_cast<double>(N);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double dk = static_cast<double>(k) - kbar;
    sxy += dk * (energy[k] - ebar);
    sxx += dk * dk;
  }
  return sxy / sxx;
}

EnergyMomentumSeries energy_momentum_report(const Trajectory& traj, const EnergyFn& E,
                                            const ConstraintDistribution& dist) {
  EnergyMomentumSeries series;
  for (const PhasePoint& z : traj.points) series.energy.push_back(E(z.q(), z.p()));
  for (std::size_t k = 0; k + 1 < traj.points.size(); ++k) {
    series.constraint_residual.push_back(norm_inf(dist.phi_d(traj.points[k].q(), traj.points[k + 1].q())));
    series.multipliers.push_back(k < traj.diagnostics.size() ? traj.diagnostics[k].multipliers : Vector(0));
  }
  return series;
}

std::vector<PhasePoint> sample_phase_points(int n, int n_samples, unsigned long long seed, double lo, double hi) {
  Rng rng(seed);
  std::vector<PhasePoint> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s) {
    Vector q = uniform_box(rng, n, lo, hi);
    Vector p = uniform_box(rng, n, lo, hi);
    out.emplace_back(std::move(q), std::move(p));
  }
  return out;
}

}  // namespace dirac
