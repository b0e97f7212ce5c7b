#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecs {

enum class ErrorCode {
  DegenerateGram,
  NotSelfAdjoint,
  NotTraceless,
  ZeroOperator,
  DimensionMismatch,
  OutOfInterval,
  InvalidProfile,
  InvalidSpec,
  StepTooLarge,
  NondegenerateCheckFailed,
  IntervalViolation,
  StepFailure,
  SpecMismatch,
  SigmaNotIsometry,
  SigmaNotConformal,
  SigmaIntervalMismatch,
  SigmaProfileMismatch,
  InvalidKillingTriple,
  ResidualTooLarge,
  NotInvariant,
  SigmaMismatch,
  UnclassifiableSigma,
  NoSystemFound,
  EigenOrderingAmbiguous,
  CyclicVectorFailure,
  CertificateFailed,
  SearchExhausted,
  BadPolynomial,
  ComplexMultipliers,
  FloquetGap,
  ConstantTrace,
  MalformedDocument,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Multiplier applied to every pass/fail tolerance. Read once from the
/// ECS_TOL_SCALE environment variable (default 1) and overridable at runtime.
double tolerance_scale();
void set_tolerance_scale(double scale);

/// Convenience: a nominal tolerance multiplied by the current scale.
inline double tol(double nominal) { return nominal * tolerance_scale(); }

}  // namespace ecs
