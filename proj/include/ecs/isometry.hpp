#pragma once

#include <cstdint>

#include "ecs/symplectic.hpp"

namespace ecs {

enum class SigmaKind { Translational, Dilational, Other };

std::string_view to_string(SigmaKind kind);

/// The four defining conditions of S as named checks: sigma_isometry
/// (C^T gram C = gram), sigma_conformal (C A C^-1 = q^2 A), sigma_interval
/// (q I + p = I) and sigma_profile (f(t) = q^2 f(q t + p) on samples).
CheckReport sigma_checks(const PlaneWaveSpec& spec, const SigmaElement& sigma);

/// Throws SigmaNotIsometry, SigmaNotConformal, SigmaIntervalMismatch or
/// SigmaProfileMismatch for the first failing condition.
SigmaElement validate_sigma(const PlaneWaveSpec& spec, double q, double p, const Mat& c);

/// Translational: q = 1 on I = R. Dilational: p = 0 on I = (0, inf).
SigmaKind sigma_kind(const PlaneWaveSpec& spec, const SigmaElement& sigma);

/// Element (r, u) of the Heisenberg group R x E.
struct HeisenbergElement {
  double r = 0.0;
  SolutionVector u;
};

/// (r, u)(r', u') = (r + r' - Omega(u, u'), u + u').
HeisenbergElement heisenberg_compose(const PlaneWaveSpec& spec, const HeisenbergElement& a,
                                     const HeisenbergElement& b);

/// Isometry (sigma, r, u) of the plane wave, bound to one spec.
struct Isometry {
  SigmaElement sigma;
  double r = 0.0;
  SolutionVector u;
  std::uint64_t spec_id = 0;

  static Isometry identity(const PlaneWaveSpec& spec);
  static Isometry make(const PlaneWaveSpec& spec, SigmaElement sigma, double r, SolutionVector u);
};

/// (t, s, v) -> (sigma t, -<u'(sigma t), 2 C v + u(sigma t)> + s / q + r, C v + u(sigma t)).
Point apply_isometry(const PlaneWaveSpec& spec, const Isometry& phi, const Point& p);

/// Closed-form Jacobian of apply_isometry in coordinates (t, s, x).
Mat isometry_jacobian(const PlaneWaveSpec& spec, const Isometry& phi, const Point& p);

/// (sigma, r, u)(sigma', r', u') = (sigma sigma', r + r'/q - Omega(u, sigma u'), u + sigma u').
Isometry compose(const PlaneWaveSpec& spec, const Isometry& a, const Isometry& b);
Isometry invert(const PlaneWaveSpec& spec, const Isometry& phi);

/// Conjugation by phi = (sigma, b, w) on H: (r, u) -> (r/q - 2 Omega(w, sigma u), sigma u).
HeisenbergElement conjugate_on_H(const PlaneWaveSpec& spec, const Isometry& phi,
                                 const HeisenbergElement& h);

/// Killing field ((a, b, P), ell, w).
struct KillingTriple {
  double a = 0.0;
  double b = 0.0;
  Mat p;
  double ell = 0.0;
  SolutionVector w;
};

/// Throws InvalidKillingTriple unless P is skew-adjoint, [P, A] = 2 a A and
/// 2 a f + (a t + b) f' = 0 on samples.
void validate_killing(const PlaneWaveSpec& spec, const KillingTriple& x);

/// (a t + b) d_t + (-<w'(t), 2 v> - a s + ell) d_s + (P v + w(t)), as a
/// coordinate vector in (t, s, x).
Vec killing_value(const PlaneWaveSpec& spec, const KillingTriple& x, const Point& p);

/// Bracket in closed form; the E-part is returned at the base time of x.w.
KillingTriple killing_bracket(const PlaneWaveSpec& spec, const KillingTriple& x,
                              const KillingTriple& y);

}  // namespace ecs
