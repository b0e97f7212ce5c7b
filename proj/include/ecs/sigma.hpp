#pragma once

#include "ecs/pseudo.hpp"

namespace ecs {

/// Element (q, p, C) of the group S acting on t by t -> q t + p and on V by C.
struct SigmaElement {
  double q = 1.0;
  double p = 0.0;
  Mat c;

  static SigmaElement identity(int m) { return {1.0, 0.0, Mat::Identity(m, m)}; }

  double act(double t) const { return q * t + p; }
  double act_inverse(double t) const { return (t - p) / q; }

  /// (q, p, C)(q', p', C') = (q q', q p' + p, C C').
  SigmaElement operator*(const SigmaElement& o) const { return {q * o.q, q * o.p + p, c * o.c}; }
  SigmaElement inverse() const { return {1.0 / q, -p / q, c.inverse()}; }
  /// sigma^k for any integer k.
  SigmaElement power(int k) const;
};

}  // namespace ecs
