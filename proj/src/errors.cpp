#include "dirac/errors.hpp"

#include <sstream>

namespace dirac {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kSingularJacobian: return "SingularJacobian";
    case ErrorCode::kDegenerateLagrangian: return "DegenerateLagrangian";
    case ErrorCode::kDegenerateHamiltonian: return "DegenerateHamiltonian";
    case ErrorCode::kRankDeficientConstraint: return "RankDeficientConstraint";
    case ErrorCode::kUnknownSystem: return "UnknownSystem";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIntegrationFailed: return "IntegrationFailed";
  }
  return "Unknown";
}

namespace {

std::string no_convergence_message(int iters, double final_norm, const std::string& context) {
  std::ostringstream os;
  os << "Newton did not converge after " << iters << " iterations (residual " << final_norm << ")";
  if (!context.empty()) os << ": " << context;
  return os.str();
}

}  // namespace

NoConvergence::NoConvergence(int iters, double final_norm, const std::string& context)
    : DiracError(ErrorCode::kNoConvergence, no_convergence_message(iters, final_norm, context)),
      iters_(iters),
      final_norm_(final_norm) {}

}  // namespace dirac
