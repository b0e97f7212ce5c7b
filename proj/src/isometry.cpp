#include "ecs/isometry.hpp"

#include <cmath>

#include "ecs/error.hpp"

namespace ecs {

namespace {

constexpr int kProfileSamples = 64;

void require_spec(const PlaneWaveSpec& spec, std::uint64_t id) {
  if (id != spec.fingerprint()) throw Error(ErrorCode::SpecMismatch, "isometry belongs to another spec");
}

void require_same_m(const PlaneWaveSpec& spec, const SolutionVector& u) {
  if (u.value.size() != spec.m() || u.velocity.size() != spec.m()) {
    throw Error(ErrorCode::DimensionMismatch, "solution vector has wrong dim");
  }
}

SolutionVector add(const PlaneWaveSpec& spec, const SolutionVector& a, const SolutionVector& b) {
  const SolutionVector bt = b.base_t == a.base_t ? b : transport(spec, b, a.base_t);
  return {a.base_t, a.value + bt.value, a.velocity + bt.velocity};
}

SolutionVector scaled(const SolutionVector& u, double k) {
  return {u.base_t, k * u.value, k * u.velocity};
}

double rel_diff(const Mat& x, const Mat& y) {
  return (x - y).cwiseAbs().maxCoeff() / std::max(1.0, y.cwiseAbs().maxCoeff());
}

}  // namespace

std::string_view to_string(SigmaKind kind) {
  switch (kind) {
    case SigmaKind::Translational: return "translational";
    case SigmaKind::Dilational: return "dilational";
    case SigmaKind::Other: break;
  }
  return "other";
}

CheckReport sigma_checks(const PlaneWaveSpec& spec, const SigmaElement& sigma) {
  CheckReport r;
  const int m = spec.m();
  if (sigma.c.rows() != m || sigma.c.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "C must be m x m");
  }
  const Mat& g = spec.space().gram();
  r.below("sigma_isometry", rel_diff(sigma.c.transpose() * g * sigma.c, g), tol(1e-10));
  const double det = sigma.c.determinant();
  const double conf = std::abs(det) > 0.0
                          ? rel_diff(sigma.c * spec.a() * sigma.c.inverse(), sigma.q * sigma.q * spec.a())
                          : std::numeric_limits<double>::infinity();
  r.below("sigma_conformal", conf, tol(1e-10));
  const bool onto = sigma.q != 0.0 && spec.interval().maps_onto_itself(sigma.q, sigma.p);
  r.add({"sigma_interval", onto, onto ? 0.0 : 1.0, 0.0, "q I + p = I"});
  double worst = 0.0;
  if (onto) {
    for (double t : spec.sample_times(kProfileSamples)) {
      const double ft = spec.f(t);
      const double fs = sigma.q * sigma.q * spec.f(sigma.act(t));
      worst = std::max(worst, std::abs(ft - fs) / (1.0 + std::abs(ft)));
    }
  } else {
    worst = std::numeric_limits<double>::infinity();
  }
  r.below("sigma_profile", worst, tol(1e-8), "f(t) = q^2 f(q t + p)");
  return r;
}

SigmaElement validate_sigma(const PlaneWaveSpec& spec, double q, double p, const Mat& c) {
  if (q == 0.0 || !std::isfinite(q) || !std::isfinite(p)) {
    throw Error(ErrorCode::SigmaIntervalMismatch, "q must be finite and nonzero");
  }
  const SigmaElement sigma{q, p, c};
  const CheckReport r = sigma_checks(spec, sigma);
  const std::pair<const char*, ErrorCode> order[] = {
      {"sigma_isometry", ErrorCode::SigmaNotIsometry},
      {"sigma_conformal", ErrorCode::SigmaNotConformal},
      {"sigma_interval", ErrorCode::SigmaIntervalMismatch},
      {"sigma_profile", ErrorCode::SigmaProfileMismatch},
  };
  for (const auto& [name, code] : order) {
    const CheckResult* c = r.find(name);
    if (!c->passed) throw Error(code, std::string(name) + " fails, residual " + std::to_string(c->residual));
  }
  return sigma;
}

SigmaKind sigma_kind(const PlaneWaveSpec& spec, const SigmaElement& sigma) {
  const auto kind = spec.interval().kind();
  if (kind == Interval::Kind::Real && std::abs(sigma.q - 1.0) <= 1e-12) return SigmaKind::Translational;
  if (kind == Interval::Kind::Positive && sigma.p == 0.0 && sigma.q > 0.0) return SigmaKind::Dilational;
  return SigmaKind::Other;
}

HeisenbergElement heisenberg_compose(const PlaneWaveSpec& spec, const HeisenbergElement& a,
                                     const HeisenbergElement& b) {
  return {a.r + b.r - omega(spec, a.u, b.u), add(spec, a.u, b.u)};
}

Isometry Isometry::identity(const PlaneWaveSpec& spec) {
  return make(spec, SigmaElement::identity(spec.m()), 0.0,
              SolutionVector::zero(spec.m(), spec.interval().base_time()));
}

Isometry Isometry::make(const PlaneWaveSpec& spec, SigmaElement sigma, double r, SolutionVector u) {
  require_same_m(spec, u);
  if (sigma.c.rows() != spec.m() || sigma.c.cols() != spec.m()) {
    throw Error(ErrorCode::DimensionMismatch, "C must be m x m");
  }
  return {std::move(sigma), r, std::move(u), spec.fingerprint()};
}

Point apply_isometry(const PlaneWaveSpec& spec, const Isometry& phi, const Point& p) {
  require_spec(spec, phi.spec_id);
  spec.require_in_interval(p.t);
  const double st = phi.sigma.act(p.t);
  spec.require_in_interval(st);
  const SolutionVector u = transport(spec, phi.u, st);
  const Vec cv = phi.sigma.c * p.v;
  const auto& space = spec.space();
  Point out;
  out.t = st;
  out.s = -space.inner(u.velocity, 2.0 * cv + u.value) + p.s / phi.sigma.q + phi.r;
  out.v = cv + u.value;
  return out;
}

Mat isometry_jacobian(const PlaneWaveSpec& spec, const Isometry& phi, const Point& p) {
  require_spec(spec, phi.spec_id);
  const int m = spec.m();
  const double q = phi.sigma.q;
  const double st = phi.sigma.act(p.t);
  const SolutionVector u = transport(spec, phi.u, st);
  const Vec acc = spec.potential(st) * u.value;
  const Mat& g = spec.space().gram();
  const Mat& c = phi.sigma.c;
  const Vec cv = c * p.v;
  Mat j = Mat::Zero(m + 2, m + 2);
  j(0, 0) = q;
  j(1, 0) = -q * (acc.dot(g * (2.0 * cv + u.value)) + u.velocity.dot(g * u.velocity));
  j(1, 1) = 1.0 / q;
  j.block(1, 2, 1, m) = -2.0 * (c.transpose() * g * u.velocity).transpose();
  j.block(2, 0, m, 1) = q * u.velocity;
  j.block(2, 2, m, m) = c;
  return j;
}

Isometry compose(const PlaneWaveSpec& spec, const Isometry& a, const Isometry& b) {
  require_spec(spec, a.spec_id);
  require_spec(spec, b.spec_id);
  const SolutionVector sb = apply_sigma(spec, a.sigma, b.u);
  Isometry out;
  out.sigma = a.sigma * b.sigma;
  out.r = a.r + b.r / a.sigma.q - omega(spec, a.u, sb);
  out.u = add(spec, a.u, sb);
  out.spec_id = a.spec_id;
  return out;
}

Isometry invert(const PlaneWaveSpec& spec, const Isometry& phi) {
  require_spec(spec, phi.spec_id);
  Isometry out;
  out.sigma = phi.sigma.inverse();
  out.r = -phi.sigma.q * phi.r;
  out.u = scaled(apply_sigma(spec, out.sigma, phi.u), -1.0);
  out.spec_id = phi.spec_id;
  return out;
}

HeisenbergElement conjugate_on_H(const PlaneWaveSpec& spec, const Isometry& phi,
                                 const HeisenbergElement& h) {
  require_spec(spec, phi.spec_id);
  require_same_m(spec, h.u);
  const SolutionVector su = apply_sigma(spec, phi.sigma, h.u);
  return {h.r / phi.sigma.q - 2.0 * omega(spec, phi.u, su), su};
}

void validate_killing(const PlaneWaveSpec& spec, const KillingTriple& x) {
  const int m = spec.m();
  if (x.p.rows() != m || x.p.cols() != m) throw Error(ErrorCode::DimensionMismatch, "P must be m x m");
  require_same_m(spec, x.w);
  const Mat& g = spec.space().gram();
  const double scale = std::max(1.0, x.p.cwiseAbs().maxCoeff());
  if ((g * x.p + x.p.transpose() * g).cwiseAbs().maxCoeff() > tol(1e-10) * scale) {
    throw Error(ErrorCode::InvalidKillingTriple, "P is not skew-adjoint");
  }
  const Mat comm = x.p * spec.a() - spec.a() * x.p;
  if (rel_diff(comm, 2.0 * x.a * spec.a()) > tol(1e-10) * scale) {
    throw Error(ErrorCode::InvalidKillingTriple, "[P, A] differs from 2 a A");
  }
  for (double t : spec.sample_times(kProfileSamples)) {
    const double f = spec.f(t);
    const double df = spec.profile().derivative(t);
    const double res = 2.0 * x.a * f + (x.a * t + x.b) * df;
    const double mag = 1.0 + std::abs(x.a * f) + std::abs((x.a * t + x.b) * df);
    if (std::abs(res) > tol(1e-8) * mag) {
      throw Error(ErrorCode::InvalidKillingTriple, "2 a f + (a t + b) f' does not vanish");
    }
  }
}

Vec killing_value(const PlaneWaveSpec& spec, const KillingTriple& x, const Point& p) {
  spec.require_in_interval(p.t);
  const int m = spec.m();
  const SolutionVector w = transport(spec, x.w, p.t);
  Vec out(m + 2);
  out(0) = x.a * p.t + x.b;
  out(1) = -spec.space().inner(w.velocity, 2.0 * p.v) - x.a * p.s + x.ell;
  out.tail(m) = x.p * p.v + w.value;
  return out;
}

KillingTriple killing_bracket(const PlaneWaveSpec& spec, const KillingTriple& x,
                              const KillingTriple& y) {
  const double t = x.w.base_t;
  const SolutionVector w = x.w;
  const SolutionVector wh = transport(spec, y.w, t);
  const Mat f = spec.potential(t);
  const double c = x.a * t + x.b;
  const double ch = y.a * t + y.b;
  KillingTriple out;
  out.a = 0.0;
  out.b = y.a * x.b - x.a * y.b;
  out.p = y.p * x.p - x.p * y.p;
  out.ell = 2.0 * omega(spec, w, wh) - y.a * x.ell + x.a * y.ell;
  // u = (a t + b) w^' - (a^ t + b^) w' + P^ w - P w^, differentiated once more
  // with w'' = (f + A) w for the velocity.
  out.w.base_t = t;
  out.w.value = c * wh.velocity - ch * w.velocity + y.p * w.value - x.p * wh.value;
  out.w.velocity = x.a * wh.velocity + c * (f * wh.value) - y.a * w.velocity - ch * (f * w.value) +
                   y.p * w.velocity - x.p * wh.velocity;
  return out;
}

}  // namespace ecs
