#include "ecs/ode.hpp"

#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "ecs/error.hpp"

namespace ecs {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

// Column-major flattening of the 2m x k state block.
struct Rhs {
  const SecondOrderSystem* sys;
  int k;
  void operator()(const State& y, State& dy, double t) const {
    const int m = sys->m;
    const Eigen::Map<const Mat> ym(y.data(), 2 * m, k);
    Eigen::Map<Mat> dym(dy.data(), 2 * m, k);
    dym.topRows(m) = ym.bottomRows(m);
    dym.bottomRows(m).noalias() = sys->potential(t) * ym.topRows(m);
  }
};

}  // namespace

Mat propagate(const SecondOrderSystem& sys, const Mat& y0, double t0, double t1) {
  if (y0.rows() != 2 * sys.m) throw Error(ErrorCode::DimensionMismatch, "state must have 2m rows");
  if (t0 == t1) return y0;
  const int k = static_cast<int>(y0.cols());
  State y(y0.data(), y0.data() + y0.size());
  const Rhs rhs{&sys, k};
  auto stepper = odeint::make_controlled(sys.abs_tol, sys.rel_tol,
                                         odeint::runge_kutta_fehlberg78<State>());
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  try {
    while (dir * (t1 - t) > 0.0) {
      double seg = std::abs(t1 - t);
      if (sys.max_step) seg = std::min(seg, sys.max_step(t));
      if (!(seg > 0.0)) throw Error(ErrorCode::StepFailure, "zero step bound at t = " + std::to_string(t));
      const double next = seg == std::abs(t1 - t) ? t1 : t + dir * seg;
      odeint::integrate_adaptive(stepper, rhs, y, t, next, dir * std::min(seg, 1e-2));
      t = next;
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::StepFailure, e.what());
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorCode::StepFailure, "non-finite state");
  }
  return Eigen::Map<const Mat>(y.data(), 2 * sys.m, k);
}

std::vector<Mat> propagate_through(const SecondOrderSystem& sys, const Mat& y0, double t0,
                                   const std::vector<double>& times) {
  std::vector<Mat> out;
  out.reserve(times.size());
  Mat y = y0;
  double t = t0;
  for (double tn : times) {
    y = propagate(sys, y, t, tn);
    t = tn;
    out.push_back(y);
  }
  return out;
}

}  // namespace ecs
