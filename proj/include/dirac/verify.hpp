#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirac/core_types.hpp"
#include "dirac/integrators.hpp"
#include "dirac/legendre.hpp"
#include "dirac/systems.hpp"

namespace dirac {

nlohmann::json to_json(const CheckReport& report);
CheckReport check_report_from_json(const nlohmann::json& j);

/// Canonical symplectic matrix [[0, I], [-I, 0]] of size 2n.
Matrix canonical_symplectic_matrix(Eigen::Index n);

/// Central-difference Jacobian of a one-step map at z, in stacked (q, p)
/// coordinates, with step sqrt(eps) max(1, |z_i|).
Matrix step_jacobian(const Stepper& stepper, const PhasePoint& z);

/// Worst ||DF^T J DF - J||_inf over the samples.
CheckReport check_symplectic(const Stepper& stepper, const std::vector<PhasePoint>& samples, double tol);

enum class GeneratingFunctionType { kType1 = 1, kType2 = 2, kType3 = 3 };

/// Slot identities of the generating function on (z, stepper(z)) for every sample:
///   type 1, S(q0, q1):  p0 = -D1 S,  p1 =  D2 S
///   type 2, S(q0, p1):  p0 =  D1 S,  q1 =  D2 S
///   type 3, S(p0, q1):  q0 = -D1 S,  p1 = -D2 S
CheckReport check_generating_function(GeneratingFunctionType type, const Stepper& stepper,
                                      const TwoSlotFunction& generator, const std::vector<PhasePoint>& samples,
                                      double tol);

/// Membership of every trajectory step in the discrete Dirac structure of the
/// given side. The difference of the Dirac differential of the generator and
/// the image Omega_{d+-}(z_k, z_{k+1}) has two momentum-type slots, which must
/// lie in the row space of A at q_k and q_{k+1} (projector residual), and two
/// position-type slots, which must vanish; (q_k, q_{k+1}) must satisfy phi_d = 0.
CheckReport check_dirac_membership(Side side, const DiscreteLagrangian& L_d, const ConstraintDistribution& dist,
                                   const Trajectory& traj, double tol);

/// The momentum fed to H_{d+} is p_{k+1} (zero gauge multiplier at q_{k+1}).
CheckReport check_dirac_membership(const DiscreteHamiltonianPlus& H, const ConstraintDistribution& dist,
                                   const Trajectory& traj, double tol);

/// The momentum fed to H_{d-} is p_k - A(q_k)^T lambda_k with lambda_k from the
/// step diagnostics.
CheckReport check_dirac_membership(const DiscreteHamiltonianMinus& H, const ConstraintDistribution& dist,
                                   const Trajectory& traj, double tol);

/// ||(I - A^T (A A^T)^{-1} A) v||_inf; ||v||_inf when A has no rows.
/// Throws DiracError(kRankDeficientConstraint) for rank-deficient A.
double annihilator_projection_residual(const Matrix& A, const Vector& v);

using ScalarFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

/// Worst ||grad - grad_fd||_inf / max(1, ||grad_fd||_inf) over the samples.
CheckReport check_gradient(const ScalarFn& f, const GradientFn& grad, const std::vector<Vector>& samples, double tol);

/// Both slot derivatives of a two-slot function on random slot pairs in [-1, 1]^2n.
CheckReport check_slot_gradients(const std::string& name, const TwoSlotFunction& f, int samples, double tol,
                                 unsigned long long seed = 0);

struct EnergyMomentumSeries {
  std::vector<double> energy;                // E(z_k), one entry per point
  std::vector<double> constraint_residual;   // ||phi_d(q_k, q_{k+1})||_inf, one per step
  std::vector<Vector> multipliers;           // lambda_k, one per step

  double max_energy_deviation() const;
  /// Least-squares slope of E_k against k; zero for fewer than two points.
  double drift_slope() const;
};

EnergyMomentumSeries energy_momentum_report(const Trajectory& traj, const EnergyFn& E,
                                            const ConstraintDistribution& dist);

/// n_samples phase points uniformly in [lo, hi]^2n.
std::vector<PhasePoint> sample_phase_points(int n, int n_samples, unsigned long long seed, double lo = -1.0,
                                            double hi = 1.0);

}  // namespace dirac
