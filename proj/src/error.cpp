#include "ecs/error.hpp"

#include <atomic>
#include <cstdlib>

namespace ecs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateGram: return "DegenerateGram";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::NotTraceless: return "NotTraceless";
    case ErrorCode::ZeroOperator: return "ZeroOperator";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutOfInterval: return "OutOfInterval";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NondegenerateCheckFailed: return "NondegenerateCheckFailed";
    case ErrorCode::IntervalViolation: return "IntervalViolation";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::SigmaNotIsometry: return "SigmaNotIsometry";
    case ErrorCode::SigmaNotConformal: return "SigmaNotConformal";
    case ErrorCode::SigmaIntervalMismatch: return "SigmaIntervalMismatch";
    case ErrorCode::SigmaProfileMismatch: return "SigmaProfileMismatch";
    case ErrorCode::InvalidKillingTriple: return "InvalidKillingTriple";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::SigmaMismatch: return "SigmaMismatch";
    case ErrorCode::UnclassifiableSigma: return "UnclassifiableSigma";
    case ErrorCode::NoSystemFound: return "NoSystemFound";
    case ErrorCode::EigenOrderingAmbiguous: return "EigenOrderingAmbiguous";
    case ErrorCode::CyclicVectorFailure: return "CyclicVectorFailure";
    case ErrorCode::CertificateFailed: return "CertificateFailed";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::BadPolynomial: return "BadPolynomial";
    case ErrorCode::ComplexMultipliers: return "ComplexMultipliers";
    case ErrorCode::FloquetGap: return "FloquetGap";
    case ErrorCode::ConstantTrace: return "ConstantTrace";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
  }
  return "Unknown";
}

namespace {

double initial_scale() {
  if (const char* env = std::getenv("ECS_TOL_SCALE")) {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    if (end != env && value > 0.0) return value;
  }
  return 1.0;
}

std::atomic<double>& scale_storage() {
  static std::atomic<double> scale{initial_scale()};
  return scale;
}

}  // namespace

double tolerance_scale() { return scale_storage().load(std::memory_order_relaxed); }

void set_tolerance_scale(double scale) {
  if (scale > 0.0) scale_storage().store(scale, std::memory_order_relaxed);
}

}  // namespace ecs
