#pragma once

#include <optional>
#include <string>

#include "ecs/exact.hpp"
#include "ecs/isometry.hpp"

namespace ecs {

/// Element (k, r, u) of G(sigma), standing for (sigma^k, r, u).
struct GSigmaElement {
  int k = 0;
  double r = 0.0;
  SolutionVector u;
  SigmaElement sigma;
};

/// (k + k', r + q^-k r' - Omega(u, sigma^k u'), u + sigma^k u'). Throws
/// SigmaMismatch if the two elements were built over different sigma.
GSigmaElement g_sigma_compose(const PlaneWaveSpec& spec, const GSigmaElement& a,
                              const GSigmaElement& b);

Isometry g_sigma_to_isometry(const PlaneWaveSpec& spec, const GSigmaElement& g);

/// Action of (k, r, u) on a point, written directly in terms of sigma^k.
Point act_g_sigma(const PlaneWaveSpec& spec, const GSigmaElement& g, const Point& p);

/// Chart R x L -> leaf t: (r, u) -> (t, r - <u'(t), u(t)>, u(t)).
Point leaf_chart(const PlaneWaveSpec& spec, double t, double r, const SolutionVector& u);

/// Lattice Sigma in R x L: column j is (r_j, coefficients of u_j in the L basis).
struct LatticeData {
  Mat basis;
  double theta = 0.0;
};

struct Classification {
  SigmaKind type = SigmaKind::Other;
  bool complete = false;
  std::string fiber;       // "torus" or "nilmanifold"
  double base_parameter;   // period p or ratio q
};

struct QuotientCertificate {
  PlaneWaveSpec spec;
  Isometry gamma;
  Subspace l;
  LatticeData lattice;
  CheckReport checks;
  std::optional<Classification> classification;
};

/// Matrix of C_gamma on R x L in (r, L-coefficient) coordinates.
Mat c_gamma_matrix(const QuotientCertificate& cert);

/// Result of the exact part of the lattice check.
struct LatticeAudit {
  IntMatrix z;                   // C_gamma in the lattice basis, rounded
  double integrality = 0.0;      // max distance to the nearest integer
  BigInt determinant = 0;
  std::vector<BigInt> charpoly;  // ascending, monic
  double theta_found = 0.0;
};

/// Validity checks on the spec (spec_operator, spec_profile)
/// and sigma, then the five conditions in order: l_first_order,
/// l_sigma_invariant, lattice_full_rank, lattice_invariant,
/// lattice_unimodular, theta_intersection, omega_integral. Never throws for
/// failing conditions; every failure is a report entry.
CheckReport verify_certificate(const QuotientCertificate& cert, LatticeAudit* audit = nullptr);

/// Throws UnclassifiableSigma unless gamma's sigma is translational or dilational.
Classification classify_quotient(const QuotientCertificate& cert);

std::string fiber_name(bool lagrangian);

}  // namespace ecs
