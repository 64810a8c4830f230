#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dirac/system_config.hpp"

namespace dirac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitCheckFailed = 3;

/// Writes the trajectory to cfg.output ("-" is `out`). A solver failure still
/// writes the partial trajectory and returns kExitNumerical.
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Checks: symplectic, genfunc1, genfunc2, genfunc3, dirac, gradient, energy.
/// Prints a JSON array of reports; kExitOk iff all pass.
int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& checks, double tol, unsigned long long seed,
               std::ostream& out, std::ostream& err);

/// Runs every method from the same initial point and reports the pairwise
/// maximum inf-norm deviation; kExitOk iff every deviation <= tol.
int cmd_compare(const RunConfig& cfg, const std::vector<std::string>& methods, double tol, std::ostream& out,
                std::ostream& err);

/// Entry point behind the `dirac` executable. Reads DIRAC_SEED.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::vector<std::string> known_checks();

}  // namespace dirac::cli
