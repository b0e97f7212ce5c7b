#include "ecs/audit.hpp"

#include <chrono>
#include <random>

#include "ecs/error.hpp"

namespace ecs {

Point random_point(const PlaneWaveSpec& spec, std::uint64_t& state) {
  std::mt19937_64 rng(state);
  state = rng();
  auto window = spec.sample_times(2);
  if (spec.interval().kind() == Interval::Kind::Positive) {
    // Coordinate components blow up like t^-2 near the boundary; stay where
    // they are O(1). Dilation-invariant specs lose nothing since [1, q)
    // is a fundamental domain.
    window = {1.0, 5.0};
  }
  std::uniform_real_distribution<double> ut(window.front(), window.back());
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Point p;
  p.t = ut(rng);
  p.s = unit(rng);
  p.v = Vec(spec.m());
  for (int i = 0; i < spec.m(); ++i) p.v(i) = unit(rng);
  return p;
}

CurvatureAudit curvature_audit(const PlaneWaveSpec& spec, int samples, double step, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::InvalidSpec, "need at least one sample");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidSpec, "step must be positive");
  const auto start = std::chrono::steady_clock::now();
  CurvatureAudit out;
  out.samples = samples;
  OracleOptions opts;
  opts.step = step;
  std::uint64_t state = seed;
  for (int k = 0; k < samples; ++k) {
    const Point p = random_point(spec, state);
    const NumericCurvatureReport num = numeric_curvature_oracle(spec, p, opts);
    out.ricci = std::max(out.ricci, num.ricci_residual);
    out.weyl = std::max(out.weyl, num.weyl_residual);
    out.nabla_weyl = std::max(out.nabla_weyl, num.nabla_weyl);
    out.scalar = std::max(out.scalar, num.scalar_residual);
    const CurvatureReport cf = closed_form_curvature(spec, p);
    out.olszak_agree = out.olszak_agree && cf.olszak_agree;
    if (k == 0) out.olszak_rank = cf.olszak_brute.rank;
    if (cf.olszak_brute.rank != out.olszak_rank) out.olszak_agree = false;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

CheckReport curvature_checks(const CurvatureAudit& a) {
  CheckReport r;
  r.below("curvature_ricci", a.ricci, tol(1e-5), "max |Ric_num - (2 - n) f dt dt|");
  r.below("curvature_weyl", a.weyl, tol(1e-5), "max Weyl bivector image difference");
  r.below("curvature_nabla_weyl", a.nabla_weyl, tol(1e-4), "max |nabla W|_num");
  r.below("curvature_scalar", a.scalar, tol(1e-6), "max |scalar curvature|");
  r.add({"olszak_rank", a.olszak_agree, a.olszak_agree ? 0.0 : 1.0, 0.0,
         "brute-force rank " + std::to_string(a.olszak_rank) + (a.olszak_agree ? " matches" : " disagrees with") +
             " the closed form"});
  return r;
}

double pullback_residual(const PlaneWaveSpec& spec, const Isometry& phi, int samples, std::uint64_t seed) {
  std::uint64_t state = seed;
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Point p = random_point(spec, state);
    const Point img = apply_isometry(spec, phi, p);
    const Mat j = isometry_jacobian(spec, phi, p);
    const Mat g0 = metric_at(spec, p);
    const Mat pulled = j.transpose() * metric_at(spec, img) * j;
    worst = std::max(worst, (pulled - g0).cwiseAbs().maxCoeff() / (1.0 + g0.cwiseAbs().maxCoeff()));
  }
  return worst;
}

CheckReport invariant_checks(const QuotientCertificate& cert, int samples, std::uint64_t seed) {
  CheckReport r;
  try {
    r.append(curvature_checks(curvature_audit(cert.spec, samples, 1e-4, seed)));
  } catch (const Error& e) {
    for (const char* n : {"curvature_ricci", "curvature_weyl", "curvature_nabla_weyl", "curvature_scalar", "olszak_rank"})
      r.add({n, false, std::numeric_limits<double>::infinity(), 0.0, e.what()});
  }
  try {
    r.below("gamma_pullback", pullback_residual(cert.spec, cert.gamma, samples, seed + 1), tol(1e-8),
            "max relative |gamma^* g - g|");
  } catch (const Error& e) {
    r.add({"gamma_pullback", false, std::numeric_limits<double>::infinity(), 0.0, e.what()});
  }
  return r;
}

}  // namespace ecs
