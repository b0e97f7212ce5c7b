#pragma once

#include <functional>
#include <vector>

#include "ecs/pseudo.hpp"

namespace ecs {

/// x'' = F(t) x for x in R^m, integrated on state blocks (x, x') of shape
/// 2m x k with an embedded Runge-Kutta-Fehlberg 7(8) pair.
struct SecondOrderSystem {
  int m = 0;
  std::function<Mat(double)> potential;           // F(t), m x m
  std::function<double(double)> max_step;         // per-segment step bound; may be empty
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
};

/// Propagates y0 (2m x k) from t0 to t1. Throws StepFailure if the
/// integrator stalls or produces non-finite values.
Mat propagate(const SecondOrderSystem& sys, const Mat& y0, double t0, double t1);

/// Propagates y0 from t0 through the monotone list of times and returns the
/// state at each of them.
std::vector<Mat> propagate_through(const SecondOrderSystem& sys, const Mat& y0, double t0,
                                   const std::vector<double>& times);

}  // namespace ecs
