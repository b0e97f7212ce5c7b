#pragma once

#include <cstdint>

#include "ecs/curvature.hpp"
#include "ecs/quotient.hpp"

namespace ecs {

/// Maximum residuals of the finite-difference oracle against the closed
/// forms over seeded random points.
struct CurvatureAudit {
  int samples = 0;
  double ricci = 0.0;
  double weyl = 0.0;
  double nabla_weyl = 0.0;
  double scalar = 0.0;
  int olszak_rank = 0;
  bool olszak_agree = true;
  double seconds = 0.0;
};

/// Random point with t in the sample window of I ([1, 5] on (0, inf)), s and
/// v in [-1, 1].
Point random_point(const PlaneWaveSpec& spec, std::uint64_t& state);

CurvatureAudit curvature_audit(const PlaneWaveSpec& spec, int samples, double step, std::uint64_t seed);

/// curvature_ricci, curvature_weyl (1e-5), curvature_nabla_weyl (1e-4),
/// curvature_scalar (1e-6), olszak_rank.
CheckReport curvature_checks(const CurvatureAudit& audit);

/// Max relative |Phi^* g - g| over seeded random points.
double pullback_residual(const PlaneWaveSpec& spec, const Isometry& phi, int samples, std::uint64_t seed);

/// Curvature and gamma-pullback checks run alongside verify_certificate.
CheckReport invariant_checks(const QuotientCertificate& cert, int samples, std::uint64_t seed);

}  // namespace ecs
