#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ecs/error.hpp"
#include "ecs/symplectic.hpp"
#include "support.hpp"

using namespace ecs;
using namespace ecs::testing;

namespace {

struct Case {
  const QuotientCertificate* cert;
  double t_lo;
  double t_hi;
};

std::vector<Case> cases() {
  return {{&*dilational5().cert, 0.5, 3.0}, {&translational5().cert, -2.0, 2.0}};
}

SolutionVector random_solution(const PlaneWaveSpec& spec) {
  return {spec.interval().base_time(), random_vec(spec.m()), random_vec(spec.m())};
}

}  // namespace

TEST(Symplectic, OmegaIsTimeIndependent) {
  for (const Case& c : cases()) {
    const auto& spec = c.cert->spec;
    for (int trial = 0; trial < 50; ++trial) {
      const SolutionVector u = random_solution(spec);
      const SolutionVector w = random_solution(spec);
      const double ref = omega(spec, u, w);
      const double t = uniform(c.t_lo, c.t_hi);
      const SolutionVector ut = transport(spec, u, t);
      const SolutionVector wt = transport(spec, w, t);
      // Evaluate <u', w> - <u, w'> at t directly from the transported data.
      const PseudoSpace& sp = spec.space();
      const double direct = sp.inner(ut.velocity, wt.value) - sp.inner(ut.value, wt.velocity);
      EXPECT_NEAR(direct, ref, 1e-8 * (1.0 + std::abs(ref)));
      EXPECT_NEAR(omega(spec, ut, w), ref, 1e-8 * (1.0 + std::abs(ref)));
    }
  }
}

TEST(Symplectic, FlowIsSymplectic) {
  for (const Case& c : cases()) {
    const auto& spec = c.cert->spec;
    const Mat j = omega_matrix(spec.space());
    const double t0 = uniform(c.t_lo, c.t_hi);
    const double t1 = uniform(c.t_lo, c.t_hi);
    const Mat phi = flow(spec, t0, t1);
    EXPECT_LT((phi.transpose() * j * phi - j).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Symplectic, SigmaScalesOmega) {
  for (const Case& c : cases()) {
    const auto& spec = c.cert->spec;
    const SigmaElement& sigma = c.cert->gamma.sigma;
    for (int trial = 0; trial < 25; ++trial) {
      const SolutionVector u = random_solution(spec);
      const SolutionVector w = random_solution(spec);
      const double lhs = omega(spec, apply_sigma(spec, sigma, u), apply_sigma(spec, sigma, w));
      const double rhs = omega(spec, u, w) / sigma.q;
      EXPECT_NEAR(lhs, rhs, 1e-8 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST(Symplectic, SigmaMatchesPointwiseDefinition) {
  // (sigma u)(t) = C u(sigma^-1 t), checked by transporting both sides.
  const auto& cert = *dilational5().cert;
  const auto& spec = cert.spec;
  const SigmaElement& sigma = cert.gamma.sigma;
  const SolutionVector u = random_solution(spec);
  const SolutionVector su = apply_sigma(spec, sigma, u);
  for (double t : {0.7, 1.3, 2.9}) {
    const Vec lhs = transport(spec, su, t).value;
    const Vec rhs = sigma.c * transport(spec, u, sigma.act_inverse(t)).value;
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + rhs.norm()));
  }
}

TEST(Symplectic, FlowComposition) {
  for (const Case& c : cases()) {
    const auto& spec = c.cert->spec;
    for (int trial = 0; trial < 10; ++trial) {
      const double t0 = uniform(c.t_lo, c.t_hi);
      const double t1 = uniform(c.t_lo, c.t_hi);
      const double t2 = uniform(c.t_lo, c.t_hi);
      const Mat lhs = flow(spec, t1, t2) * flow(spec, t0, t1);
      const Mat rhs = flow(spec, t0, t2);
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff() / (1.0 + rhs.cwiseAbs().maxCoeff()), 1e-8);
    }
    const double t = uniform(c.t_lo, c.t_hi);
    EXPECT_LT((flow(spec, t, t) - Mat::Identity(2 * spec.m(), 2 * spec.m())).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_THROW(flow(dilational5().cert->spec, 1.0, -1.0), Error);
}

TEST(Symplectic, RiccatiRoundTrip) {
  const auto& w = translational5();
  const auto& spec = w.cert.spec;
  const Subspace l = riccati_basis(spec, w.b);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = uniform(-1.5, 1.5);
    const Mat b = w.b.value(t);
    const Mat rec = recover_b(spec, l, t);
    EXPECT_LT((rec - b).cwiseAbs().maxCoeff(), 1e-6) << "t = " << t;
  }
  const RiccatiCurve sampled = riccati_from_subspace(spec, l, -1.0, 1.0, 256);
  for (double t : {-0.9, -0.2, 0.45, 0.8}) {
    EXPECT_LT((sampled.value(t) - w.b.value(t)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Symplectic, RiccatiBasisIsFirstOrderAndSigmaInvariant) {
  for (const Case& c : cases()) {
    const auto& cert = *c.cert;
    const CheckReport r = subspace_checks(cert.spec, cert.l, &cert.gamma.sigma);
    EXPECT_TRUE(r.find("first_order")->passed);
    EXPECT_TRUE(r.find("sigma_invariant")->passed);
    EXPECT_TRUE(r.find("lagrangian")->passed);
  }
}

TEST(Symplectic, DetRestrictionMatchesDirectDeterminant) {
  const auto& w = translational5();
  const DetRestriction d = det_restriction(w.cert.spec, w.b, w.cert.gamma.sigma);
  EXPECT_LT(d.relative_error(), 1e-6);
  // Independent quadrature of tr B over one period.
  const double p = w.cert.gamma.sigma.p;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double t) { return w.b.value(t).trace(); }, 0.0, p, 10, 1e-12);
  EXPECT_NEAR(d.formula, w.cert.gamma.sigma.c.determinant() * std::exp(-integral), 1e-9 * std::abs(d.formula));
}

TEST(Symplectic, SubspaceRejectsDependentBasis) {
  Mat basis = Mat::Zero(6, 3);
  basis(0, 0) = 1.0;
  basis(0, 1) = 1.0;
  basis(1, 2) = 1.0;
  EXPECT_THROW(Subspace(0.0, basis), Error);
}
