#include <gtest/gtest.h>

#include "ecs/error.hpp"
#include "ecs/isometry.hpp"
#include "ecs/quotient.hpp"
#include "support.hpp"

using namespace ecs;
using namespace ecs::testing;

namespace {

SolutionVector random_solution(const PlaneWaveSpec& spec, double scale = 0.5) {
  return {spec.interval().base_time(), random_vec(spec.m(), -scale, scale), random_vec(spec.m(), -scale, scale)};
}

// Random element of S x| H for the dilational spec: sigma^k, r, u.
Isometry random_dil_isometry(int k) {
  const auto& cert = *dilational5().cert;
  return Isometry::make(cert.spec, cert.gamma.sigma.power(k), uniform(-1, 1), random_solution(cert.spec));
}

Isometry random_tr_isometry(int k) {
  const auto& cert = translational5().cert;
  return Isometry::make(cert.spec, cert.gamma.sigma.power(k), uniform(-1, 1), random_solution(cert.spec));
}

double point_distance(const Point& a, const Point& b) {
  return std::max({std::abs(a.t - b.t), std::abs(a.s - b.s), (a.v - b.v).cwiseAbs().maxCoeff()});
}

}  // namespace

TEST(Isometry, PullbackPreservesMetric) {
  for (int trial = 0; trial < 100; ++trial) {
    const bool dil = trial % 2 == 0;
    const PlaneWaveSpec& spec = dil ? dilational5().cert->spec : translational5().cert.spec;
    const Isometry phi = dil ? random_dil_isometry(trial % 3 - 1) : random_tr_isometry(trial % 3 - 1);
    const Point p = dil ? random_point_in(spec, 0.8, 1.5) : random_point_in(spec, -1.0, 1.0);
    const Mat jac = isometry_jacobian(spec, phi, p);
    const Mat pulled = jac.transpose() * metric_at(spec, apply_isometry(spec, phi, p)) * jac;
    const Mat g = metric_at(spec, p);
    EXPECT_LT((pulled - g).cwiseAbs().maxCoeff() / (1.0 + g.cwiseAbs().maxCoeff()), 1e-8);
  }
}

TEST(Isometry, ClosedFormJacobianMatchesFiniteDifferences) {
  const auto& spec = dilational5().cert->spec;
  for (int trial = 0; trial < 10; ++trial) {
    const Isometry phi = random_dil_isometry(trial % 2);
    const Point p = random_point_in(spec, 0.8, 1.5);
    const Mat num = numeric_jacobian([&](const Vec& x) { return coords(apply_isometry(spec, phi, point_of(x))); },
                                     coords(p), 1e-5);
    const Mat jac = isometry_jacobian(spec, phi, p);
    EXPECT_LT((num - jac).cwiseAbs().maxCoeff() / (1.0 + jac.cwiseAbs().maxCoeff()), 1e-6);
  }
}

TEST(Isometry, SemidirectGroupAxioms) {
  const auto& spec = dilational5().cert->spec;
  for (int trial = 0; trial < 20; ++trial) {
    const Isometry a = random_dil_isometry(1);
    const Isometry b = random_dil_isometry(-1);
    const Isometry c = random_dil_isometry(0);
    const Point p = random_point_in(spec, 0.8, 1.5);
    const Isometry ab_c = compose(spec, compose(spec, a, b), c);
    const Isometry a_bc = compose(spec, a, compose(spec, b, c));
    EXPECT_NEAR(ab_c.r, a_bc.r, 1e-9);
    EXPECT_LT(point_distance(apply_isometry(spec, ab_c, p), apply_isometry(spec, a_bc, p)), 1e-9);
    // Composition is the action composition.
    EXPECT_LT(point_distance(apply_isometry(spec, compose(spec, a, b), p),
                             apply_isometry(spec, a, apply_isometry(spec, b, p))),
              1e-9);
    const Isometry e = compose(spec, a, invert(spec, a));
    EXPECT_LT(point_distance(apply_isometry(spec, e, p), p), 1e-9);
    const Isometry e2 = compose(spec, invert(spec, a), a);
    EXPECT_LT(point_distance(apply_isometry(spec, e2, p), p), 1e-9);
    EXPECT_LT(point_distance(apply_isometry(spec, Isometry::identity(spec), p), p), 1e-15);
  }
}

TEST(Isometry, HeisenbergAxioms) {
  const auto& spec = translational5().cert.spec;
  for (int trial = 0; trial < 20; ++trial) {
    const HeisenbergElement a{uniform(-1, 1), random_solution(spec)};
    const HeisenbergElement b{uniform(-1, 1), random_solution(spec)};
    const HeisenbergElement c{uniform(-1, 1), random_solution(spec)};
    const auto l = heisenberg_compose(spec, heisenberg_compose(spec, a, b), c);
    const auto r = heisenberg_compose(spec, a, heisenberg_compose(spec, b, c));
    EXPECT_NEAR(l.r, r.r, 1e-9);
    EXPECT_LT((l.u.state() - r.u.state()).cwiseAbs().maxCoeff(), 1e-9);
    const HeisenbergElement inv{-a.r, {a.u.base_t, -a.u.value, -a.u.velocity}};
    const auto e = heisenberg_compose(spec, a, inv);
    EXPECT_NEAR(e.r, 0.0, 1e-12);
    EXPECT_LT(e.u.state().norm(), 1e-12);
    // Center: (r, 0) commutes with everything.
    const HeisenbergElement z{0.7, SolutionVector::zero(spec.m(), 0.0)};
    EXPECT_NEAR(heisenberg_compose(spec, z, a).r, heisenberg_compose(spec, a, z).r, 1e-12);
  }
}

TEST(Isometry, GSigmaAxiomsAndAction) {
  for (const bool dil : {true, false}) {
    const QuotientCertificate& cert = dil ? *dilational5().cert : translational5().cert;
    const auto& spec = cert.spec;
    const SigmaElement& sigma = cert.gamma.sigma;
    auto random_g = [&](int k) { return GSigmaElement{k, uniform(-1, 1), random_solution(spec), sigma}; };
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_g(1);
      const auto b = random_g(-2);
      const auto c = random_g(1);
      const Point p = dil ? random_point_in(spec, 0.8, 1.5) : random_point_in(spec, -1.0, 1.0);
      const auto l = g_sigma_compose(spec, g_sigma_compose(spec, a, b), c);
      const auto r = g_sigma_compose(spec, a, g_sigma_compose(spec, b, c));
      EXPECT_EQ(l.k, r.k);
      EXPECT_NEAR(l.r, r.r, 1e-9);
      EXPECT_LT((l.u.state() - transport(spec, r.u, l.u.base_t).state()).cwiseAbs().maxCoeff(), 1e-9);
      // The direct action agrees with the isometry it names, and the map
      // to isometries is a homomorphism.
      EXPECT_LT(point_distance(act_g_sigma(spec, a, p), apply_isometry(spec, g_sigma_to_isometry(spec, a), p)), 1e-9);
      const Isometry ab = compose(spec, g_sigma_to_isometry(spec, a), g_sigma_to_isometry(spec, b));
      EXPECT_LT(point_distance(act_g_sigma(spec, g_sigma_compose(spec, a, b), p), apply_isometry(spec, ab, p)),
                1e-9);
      const GSigmaElement e{0, 0.0, SolutionVector::zero(spec.m(), spec.interval().base_time()), sigma};
      EXPECT_LT(point_distance(act_g_sigma(spec, g_sigma_compose(spec, e, a), p), act_g_sigma(spec, a, p)), 1e-12);
    }
  }
  const auto& d = *dilational5().cert;
  const auto& t = translational5().cert;
  const GSigmaElement x{1, 0.0, SolutionVector::zero(3, 1.0), d.gamma.sigma};
  const GSigmaElement y{1, 0.0, SolutionVector::zero(3, 1.0), t.gamma.sigma};
  EXPECT_THROW(g_sigma_compose(d.spec, x, y), Error);
}

TEST(Isometry, ConjugationFormula) {
  const auto& spec = dilational5().cert->spec;
  const int m = spec.m();
  for (int trial = 0; trial < 20; ++trial) {
    const Isometry phi = random_dil_isometry(trial % 3 - 1);
    const HeisenbergElement h{uniform(-1, 1), random_solution(spec)};
    const Isometry hi = Isometry::make(spec, SigmaElement::identity(m), h.r, h.u);
    const Isometry conj = compose(spec, compose(spec, phi, hi), invert(spec, phi));
    const HeisenbergElement formula = conjugate_on_H(spec, phi, h);
    EXPECT_NEAR(conj.sigma.q, 1.0, 1e-12);
    EXPECT_LT((conj.sigma.c - Mat::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(conj.r, formula.r, 1e-8);
    const SolutionVector cu = transport(spec, conj.u, formula.u.base_t);
    EXPECT_LT((cu.state() - formula.u.state()).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Isometry, SpecMismatchIsRejected) {
  const auto& dil = *dilational5().cert;
  const auto& tr = translational5().cert;
  const Point p{0.1, 0.0, Vec::Zero(3)};
  try {
    apply_isometry(tr.spec, dil.gamma, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpecMismatch);
  }
}

TEST(Isometry, SigmaValidation) {
  const auto& spec = dilational5().cert->spec;
  const auto& sigma = dilational5().cert->gamma.sigma;
  EXPECT_TRUE(sigma_checks(spec, sigma).all_passed());
  EXPECT_EQ(sigma_kind(spec, sigma), SigmaKind::Dilational);
  EXPECT_EQ(sigma_kind(translational5().cert.spec, translational5().cert.gamma.sigma), SigmaKind::Translational);
  try {
    validate_sigma(spec, sigma.q * 1.01, 0.0, sigma.c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SigmaNotConformal);
  }
  try {
    validate_sigma(spec, sigma.q, 0.5, sigma.c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SigmaIntervalMismatch);
  }
}

TEST(Isometry, LogPeriodicPerturbationKeepsSigma) {
  // Same Floquet data, different profile: f = ((n^2 - 1)/4 + eps sin(2 pi log t / log q)) / t^2.
  const auto& w = dilational5();
  const auto& spec = w.cert->spec;
  LogPeriodicProfile lp;
  lp.coeff = std::get<InverseSquareProfile>(spec.profile().kind()).coeff;
  lp.ratio = w.q;
  lp.sin = {0.05};
  const auto pert = PlaneWaveSpec::make(spec.space(), spec.a(), spec.interval(), Profile(lp));
  EXPECT_NO_THROW(validate_sigma(pert, w.q, 0.0, w.cert->gamma.sigma.c));
  for (double t : {0.3, 1.0, 2.2}) {
    EXPECT_NEAR(w.q * w.q * pert.f(w.q * t), pert.f(t), 1e-12 * (1.0 + std::abs(pert.f(t))));
  }
}

TEST(Killing, DilationalFieldsAreKilling) {
  const auto& spec = dilational5().cert->spec;
  for (int trial = 0; trial < 10; ++trial) {
    KillingTriple x;
    x.a = uniform(-1, 1);
    x.b = 0.0;
    x.p = Vec((Vec(3) << x.a, 0.0, -x.a).finished()).asDiagonal();
    x.ell = uniform(-1, 1);
    x.w = random_solution(spec);
    EXPECT_NO_THROW(validate_killing(spec, x));
    const Point p = random_point_in(spec, 0.8, 1.5);
    EXPECT_LT(lie_derivative_residual(spec, x, p, 1e-5), 1e-5);
  }
}

TEST(Killing, RejectsNonKillingTriples) {
  const auto& spec = dilational5().cert->spec;
  KillingTriple x;
  x.a = 0.5;
  x.b = 0.3;  // breaks 2 a f + (a t + b) f' = 0
  x.p = Vec((Vec(3) << 0.5, 0.0, -0.5).finished()).asDiagonal();
  x.w = SolutionVector::zero(3, 1.0);
  EXPECT_THROW(validate_killing(spec, x), Error);
  x.b = 0.0;
  x.p(1, 1) = 0.2;  // no longer skew-adjoint
  EXPECT_THROW(validate_killing(spec, x), Error);
}

TEST(Killing, BracketMatchesNumericCommutator) {
  for (int trial = 0; trial < 10; ++trial) {
    const bool dil = trial % 2 == 0;
    const PlaneWaveSpec& spec = dil ? dilational5().cert->spec : translational5().cert.spec;
    KillingTriple x;
    KillingTriple y;
    for (KillingTriple* k : {&x, &y}) {
      k->a = dil ? uniform(-1, 1) : 0.0;
      k->p = dil ? Mat(Vec((Vec(3) << k->a, 0.0, -k->a).finished()).asDiagonal()) : Mat(Mat::Zero(3, 3));
      k->ell = uniform(-1, 1);
      k->w = random_solution(spec);
    }
    const KillingTriple z = killing_bracket(spec, x, y);
    EXPECT_NO_THROW(validate_killing(spec, z));
    const Point p = dil ? random_point_in(spec, 0.8, 1.5) : random_point_in(spec, -1.0, 1.0);
    const Vec num = numeric_commutator(spec, x, y, p, 1e-5);
    const Vec closed = killing_value(spec, z, p);
    EXPECT_LT((num - closed).cwiseAbs().maxCoeff() / (1.0 + closed.cwiseAbs().maxCoeff()), 1e-5);
  }
}

namespace {

// Solutions C of C A = q^2 A C, as columns of a Kronecker null space.
Mat conformal_solutions(const Mat& a, double q) {
  const auto m = a.rows();
  const Mat id = Mat::Identity(m, m);
  Mat k(m * m, m * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      k.block(i * m, j * m, m, m) = a(j, i) * id - (i == j ? q * q : 0.0) * a;
    }
  }
  return null_space(k, 1e-10);
}

}  // namespace

TEST(Isometry, DefiniteFiberForcesTranslational) {
  // Conjugation preserves the spectrum of A, so C A C^-1 = q^2 A with A != 0
  // needs q^2 = 1 when A has real spectrum. Every solution C for q^2 != 1 is
  // singular; coincidences lambda_i = q^2 lambda_j only give rank-one maps.
  const Mat a = Vec((Vec(3) << 1.0, 2.0, -3.0).finished()).asDiagonal();
  for (double q : {std::sqrt(2.0), 1.5, 0.5, 2.0}) {
    const Mat sols = conformal_solutions(a, q);
    for (Eigen::Index c = 0; c < sols.cols(); ++c) {
      const Mat cm = Eigen::Map<const Mat>(sols.col(c).data(), 3, 3);
      EXPECT_LT(numeric_rank(cm, 1e-8), 3) << "q = " << q;
    }
    Vec combo = Vec::Zero(9);
    for (Eigen::Index c = 0; c < sols.cols(); ++c) combo += uniform(0.5, 1.5) * sols.col(c);
    EXPECT_NEAR(Eigen::Map<const Mat>(combo.data(), 3, 3).determinant(), 0.0, 1e-12);
  }
  EXPECT_GT(conformal_solutions(a, 1.0).cols(), 0);
  // The semi-neutral dilational fiber does admit an invertible C.
  const auto& cert = *dilational5().cert;
  EXPECT_GT(numeric_rank(cert.gamma.sigma.c), 2);
  EXPECT_NO_THROW(validate_sigma(cert.spec, cert.gamma.sigma.q, 0.0, cert.gamma.sigma.c));
}
