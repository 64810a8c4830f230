#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dirac/integrators.hpp"

namespace dirac {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// Columns: k, q_0..q_{n-1}, p_0..p_{n-1}, newton_iters, residual_norm,
/// constraint_violation, lambda_0..lambda_{m-1}. Row k > 0 carries the
/// diagnostics of the step that produced point k; row 0 carries zeros.
void write_trajectory_csv(const Trajectory& traj, int m, std::ostream& out);

/// Inverse of write_trajectory_csv (the column layout is read from the header).
Trajectory read_trajectory_csv(std::istream& in);

nlohmann::json trajectory_to_json(const Trajectory& traj, int m);

}  // namespace dirac
