#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ecs/ode.hpp"
#include "ecs/planewave.hpp"
#include "ecs/report.hpp"
#include "ecs/sigma.hpp"

namespace ecs {

/// Element of the solution space E of u'' = f u + A u, stored as initial
/// data at base_t. The zero vector is allowed.
struct SolutionVector {
  double base_t = 0.0;
  Vec value;
  Vec velocity;

  static SolutionVector zero(int m, double base_t);
  /// state = (value, velocity) stacked.
  static SolutionVector from_state(double base_t, const Vec& state);
  Vec state() const;
};

/// The ODE of E for a given spec, with step bounds from the profile.
SecondOrderSystem solution_system(const PlaneWaveSpec& spec);

/// 2m x 2m matrix taking initial data at t0 to initial data at t1.
/// Throws IntervalViolation unless both times lie in I.
Mat flow(const PlaneWaveSpec& spec, double t0, double t1);

/// The same solution, re-expressed by its initial data at t.
SolutionVector transport(const PlaneWaveSpec& spec, const SolutionVector& u, double t);

/// Matrix J of Omega on stacked initial data: Omega(y, z) = y^T J z.
Mat omega_matrix(const PseudoSpace& space);

/// Omega(u, w) = <u', w> - <u, w'>, after moving w to the base time of u.
double omega(const PlaneWaveSpec& spec, const SolutionVector& u, const SolutionVector& w);

/// Matrix of u -> sigma u on initial data at base_t, where
/// (sigma u)(t) = C u(sigma^{-1} t). Defaults to the interval's base time.
Mat sigma_matrix_on_E(const PlaneWaveSpec& spec, const SigmaElement& sigma,
                      std::optional<double> base_t = std::nullopt);

/// sigma u, with initial data at the base time of u.
SolutionVector apply_sigma(const PlaneWaveSpec& spec, const SigmaElement& sigma,
                           const SolutionVector& u);

/// k solutions at a common base time, stored as the columns of a 2m x k
/// matrix of initial data.
class Subspace {
 public:
  /// Throws DimensionMismatch on a shape error or a dependent basis
  /// (smallest singular value at most 1e-8 of the largest).
  Subspace(double base_t, Mat basis);

  double base_t() const { return base_t_; }
  const Mat& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  int m() const { return static_cast<int>(basis_.rows() / 2); }
  SolutionVector vector(int i) const;

 private:
  double base_t_;
  Mat basis_;
};

Subspace transport(const PlaneWaveSpec& spec, const Subspace& l, double t);

/// B = diag(entries), constant in t.
struct ConstantDiagonal {
  Vec entries;
};

/// B = diag(b_1(t), ..., b_m(t)) with Fourier entries of a common period.
struct FourierDiagonal {
  std::vector<FourierSeries> entries;
};

/// Piecewise cubic Hermite interpolant through (node, value, derivative).
/// With a period, the nodes cover exactly one period and the curve repeats.
struct SampledCurve {
  std::vector<double> nodes;
  std::vector<Mat> values;
  std::vector<Mat> derivatives;
  std::optional<double> period;
};

/// A curve B : I -> End(V), expected to solve B' + B^2 = f + A.
class RiccatiCurve {
 public:
  using Kind = std::variant<ConstantDiagonal, FourierDiagonal, SampledCurve>;

  RiccatiCurve(Kind kind);  // NOLINT(google-explicit-constructor)

  int dim() const;
  Mat value(double t) const;
  Mat derivative(double t) const;
  /// Integral of tr B over [a, b] (either orientation).
  double trace_integral(double a, double b) const;
  /// Closed range where a non-periodic sampled curve is defined; nullopt
  /// when B is defined on all of R.
  std::optional<std::pair<double, double>> domain() const;
  std::optional<double> period() const;
  std::string kind_name() const;
  const Kind& kind() const { return kind_; }

 private:
  Kind kind_;
};

/// max over samples of |B' + B^2 - f - A|.
double riccati_residual(const PlaneWaveSpec& spec, const RiccatiCurve& b, int samples = 128);

/// Basis (e_i, B(t*) e_i) of the first-order subspace of B at t*.
/// Throws ResidualTooLarge if B fails its defining equation.
Subspace riccati_basis(const PlaneWaveSpec& spec, const RiccatiCurve& b,
                       std::optional<double> base_t = std::nullopt);

/// B(t) = (velocities)(values)^{-1} of the basis transported to t. Throws
/// NondegenerateCheckFailed when the evaluation map at t is near singular.
Mat recover_b(const PlaneWaveSpec& spec, const Subspace& l, double t);

/// Sampled Riccati curve of L over [t0, t1] on a uniform grid.
RiccatiCurve riccati_from_subspace(const PlaneWaveSpec& spec, const Subspace& l, double t0,
                                   double t1, int intervals, std::optional<double> period = {});

/// Times at which the first-order property is examined: 64 points of the
/// fundamental domain [t*, sigma t*] when sigma moves t*, otherwise the
/// spec's sample window.
std::vector<double> first_order_grid(const PlaneWaveSpec& spec, const SigmaElement* sigma,
                                     int count = 64);

/// Checks named first_order, lagrangian, sigma_invariant and, with B,
/// riccati_self_adjoint, riccati_equivariant plus the two consistency
/// checks between them.
CheckReport subspace_checks(const PlaneWaveSpec& spec, const Subspace& l,
                            const SigmaElement* sigma = nullptr, const RiccatiCurve* b = nullptr);

/// Matrix M with (sigma matrix) * basis = basis * M. Throws NotInvariant if
/// the relative residual of that equation exceeds tolerance.
Mat restriction_matrix(const PlaneWaveSpec& spec, const Subspace& l, const SigmaElement& sigma,
                       double tolerance = 1e-6);

struct DetRestriction {
  double formula = 0.0;  // det C * exp(-int_{t*}^{sigma t*} tr B)
  double direct = 0.0;   // det of sigma restricted to L(B)
  double relative_error() const;
};

DetRestriction det_restriction(const PlaneWaveSpec& spec, const RiccatiCurve& b,
                               const SigmaElement& sigma);

}  // namespace ecs
