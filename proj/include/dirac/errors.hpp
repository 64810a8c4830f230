#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

enum class ErrorCode {
  kDimensionMismatch,
  kNonFinite,
  kNoConvergence,
  kSingularJacobian,
  kDegenerateLagrangian,
  kDegenerateHamiltonian,
  kRankDeficientConstraint,
  kUnknownSystem,
  kConfigError,
  kIntegrationFailed,
};

const char* to_string(ErrorCode code);

/// Base of every error thrown by the library. The code identifies the failure
/// class; the message carries the specifics.
class DiracError : public std::runtime_error {
 public:
  DiracError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class NoConvergence : public DiracError {
 public:
  NoConvergence(int iters, double final_norm, const std::string& context = "");

  int iters() const noexcept { return iters_; }
  double final_norm() const noexcept { return final_norm_; }

 private:
  int iters_;
  double final_norm_;
};

}  // namespace dirac
