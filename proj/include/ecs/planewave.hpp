#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ecs/profile.hpp"
#include "ecs/pseudo.hpp"

namespace ecs {

/// Open interval I of the t-coordinate: all of R, (0, inf), or (lo, hi).
class Interval {
 public:
  enum class Kind { Real, Positive, Open };

  static Interval real() { return Interval(Kind::Real, -kInf, kInf); }
  static Interval positive() { return Interval(Kind::Positive, 0.0, kInf); }
  static Interval open(double lo, double hi);

  Kind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool contains(double t) const { return t > lo_ && t < hi_; }

  /// Reference time t*: 0 on R, 1 on (0, inf), the midpoint otherwise.
  double base_time() const;

  /// Image {q t + p : t in I} equals I.
  bool maps_onto_itself(double q, double p) const;

  bool operator==(const Interval& o) const {
    return kind_ == o.kind_ && lo_ == o.lo_ && hi_ == o.hi_;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  Interval(Kind k, double lo, double hi) : kind_(k), lo_(lo), hi_(hi) {}
  Kind kind_;
  double lo_;
  double hi_;
};

struct Point {
  double t = 0.0;
  double s = 0.0;
  Vec v;
};

/// Standard plane wave I x R x V with metric kappa dt^2 + dt ds + <.,.>,
/// kappa(t, s, v) = f(t) <v, v> + <A v, v>.
class PlaneWaveSpec {
 public:
  /// Validated construction: A must be nonzero, traceless and self-adjoint,
  /// f must be defined on I and nonconstant, and n = dim V + 2 >= 4.
  static PlaneWaveSpec make(PseudoSpace space, Mat a, Interval interval, Profile profile);

  /// Skips the ECS-specific requirements on A and f (the oracle tests feed
  /// flat and locally symmetric metrics through the same code).
  static PlaneWaveSpec unchecked(PseudoSpace space, Mat a, Interval interval, Profile profile);

  int n() const { return space_.dim() + 2; }
  int m() const { return space_.dim(); }
  const PseudoSpace& space() const { return space_; }
  const Mat& a() const { return a_; }
  const Interval& interval() const { return interval_; }
  const Profile& profile() const { return profile_; }
  bool validated() const { return validated_; }

  double f(double t) const { return profile_.value(t); }

  /// Operator f(t) Id + A driving the solution space ODE.
  Mat potential(double t) const;

  /// Content hash over all defining data; equal specs hash equal.
  std::uint64_t fingerprint() const { return fingerprint_; }
  bool same_as(const PlaneWaveSpec& other) const { return fingerprint_ == other.fingerprint_; }

  /// count times spread over a representative window of I: two periods on
  /// either side of t* for periodic profiles, [0.2, 5] on (0, inf).
  std::vector<double> sample_times(int count) const;

  /// Throws OutOfInterval unless t lies in I.
  void require_in_interval(double t) const;

 private:
  PlaneWaveSpec(PseudoSpace space, Mat a, Interval interval, Profile profile, bool validated);
  PseudoSpace space_;
  Mat a_;
  Interval interval_;
  Profile profile_;
  bool validated_ = false;
  std::uint64_t fingerprint_ = 0;
};

double kappa_at(const PlaneWaveSpec& spec, double t, const Vec& v);

/// Metric matrix in coordinates (t, s, x^1..x^m): g_tt = kappa, g_ts = 1/2,
/// g_ij = gram_ij, all else zero.
Mat metric_at(const PlaneWaveSpec& spec, const Point& p);

/// Same as metric_at but without the interval check; used by finite
/// difference stencils which are validated separately.
Mat metric_unchecked(const PlaneWaveSpec& spec, double t, const Vec& v);

}  // namespace ecs
