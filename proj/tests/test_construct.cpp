#include <gtest/gtest.h>

#include <algorithm>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ecs/construct.hpp"
#include "ecs/error.hpp"
#include "support.hpp"

using namespace ecs;
using namespace ecs::testing;

namespace {

// Direct restatement of the Z-spectral conditions, 1-based as written.
bool z_spectral_ok(const ZSpectralSystem& s) {
  const int m = s.m;
  if (static_cast<int>(s.e.size()) != 2 * m || static_cast<int>(s.j.size()) != 2 * m) return false;
  auto E = [&](int i) { return s.e[static_cast<std::size_t>(i - 1)]; };
  auto J = [&](int i) { return s.j[static_cast<std::size_t>(i - 1)]; };
  if (s.k + 1 != 2 * E(1)) return false;
  std::vector<int> y{-1};
  for (int i = 1; i <= 2 * m; ++i) {
    if (J(i) != 0 && J(i) != 1) return false;
    if (E(i) == -1) return false;
    for (int l = i + 1; l <= 2 * m; ++l) {
      if (E(i) == E(l)) return false;
    }
    const int ip = 2 * m + 1 - i;
    if (E(i) + E(ip) != -1 || J(i) + J(ip) != 1) return false;
    if (i % 2 == 1 && (E(i) - E(i + 1) != s.k || J(i) + J(i + 1) != 1)) return false;
    if (J(i) == 1) y.push_back(E(i));
  }
  for (int v : y) {
    if (std::find(y.begin(), y.end(), -v) == y.end()) return false;
  }
  return true;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(ZSpectral, FiveDimensionalSystem) {
  const ZSpectralSystem s = search_zspectral(3, 5);
  const std::vector<int> e{3, -2, 2, -3, 1, -4};
  const std::vector<int> j{1, 0, 0, 1, 1, 0};
  EXPECT_EQ(s.e, e);
  EXPECT_EQ(s.j, j);
  EXPECT_TRUE(verify_zspectral(s).all_passed());
  EXPECT_TRUE(z_spectral_ok(s));
}

TEST(ZSpectral, SearchCoversOddDimensions) {
  for (int n : {5, 7, 9, 11}) {
    const ZSpectralSystem s = search_zspectral(n - 2, n);
    EXPECT_EQ(s.m, n - 2);
    EXPECT_TRUE(verify_zspectral(s).all_passed()) << "n = " << n;
    EXPECT_TRUE(z_spectral_ok(s)) << "n = " << n;
  }
}

TEST(ZSpectral, EvenKHasNoSystem) {
  try {
    search_zspectral(3, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSystemFound);
  }
}

TEST(ZSpectral, VerifierAgreesWithOracleOnMutations) {
  const ZSpectralSystem base = search_zspectral(3, 5);
  for (std::size_t i = 0; i < base.e.size(); ++i) {
    for (int d : {-2, -1, 1, 2}) {
      ZSpectralSystem s = base;
      s.e[i] += d;
      EXPECT_EQ(verify_zspectral(s).all_passed(), z_spectral_ok(s));
    }
    ZSpectralSystem t = base;
    t.j[i] = 1 - t.j[i];
    EXPECT_EQ(verify_zspectral(t).all_passed(), z_spectral_ok(t));
    EXPECT_FALSE(verify_zspectral(t).find("zs_selector")->passed);
  }
}

TEST(IntegerTheta, SearchFindsFirstCubic) {
  const IntegerThetaMatrix tm = search_integer_theta(3);
  const std::vector<long long> expect{-1, 5, -6, 1};
  EXPECT_EQ(tm.charpoly, expect);
  // Roots against the companion eigenvalues from Eigen.
  Eigen::VectorXcd ev = tm.t.cast<double>().eigenvalues();
  std::vector<double> re;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    EXPECT_LT(std::abs(ev(i).imag()), 1e-9);
    re.push_back(ev(i).real());
  }
  std::sort(re.begin(), re.end());
  ASSERT_EQ(tm.eigenvalues.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(tm.eigenvalues[i], re[i], 1e-9);
  EXPECT_EQ(characteristic_polynomial(tm.t), std::vector<BigInt>({-1, 5, -6, 1}));
}

TEST(IntegerTheta, RejectsBadPolynomials) {
  for (const std::vector<long long>& c : std::vector<std::vector<long long>>{
           {-1, 3, -3, 1},   // (x - 1)^3
           {2, -3, 1},       // constant term not +-1
           {1, 1, 1},        // complex roots
           {1, 3, 3, 1},     // negative roots
           {1, -2, 1},       // repeated root 1
           {-1, 2},          // not monic
       }) {
    EXPECT_THROW(validate_charpoly(c), Error);
  }
  // Degree 2 forces roots {l, 1/l}, which the construction cannot use.
  EXPECT_THROW(validate_charpoly({1, -3, 1}), Error);
  EXPECT_NO_THROW(validate_charpoly({-1, 5, -6, 1}));
}

TEST(Floquet, ZeroPotentialGivesExponentials) {
  const Profile zero = Profile::fourier(FourierSeries{2.0, 0.0, {}, {}});
  const double c = 0.7;
  const FloquetData d = floquet_exponent(zero, c * c, 2.0);
  EXPECT_NEAR(d.multipliers[0].real(), std::exp(2.0 * c), 1e-9);
  EXPECT_NEAR(d.multipliers[1].real(), std::exp(-2.0 * c), 1e-9);
  ASSERT_TRUE(d.log_integrals.has_value());
  EXPECT_NEAR((*d.log_integrals)[0], 2.0 * c, 1e-6);
  EXPECT_NEAR((*d.log_integrals)[1], -2.0 * c, 1e-6);
  EXPECT_NEAR(d.monodromy.determinant(), 1.0, 1e-9);
}

TEST(Floquet, MultiplierProductIsOne) {
  const Profile phi = Profile::fourier(FourierSeries{1.0, 0.0, {0.8, 0.1}, {0.3}});
  for (double delta : {1.0, 3.0, 8.0}) {
    const FloquetData d = floquet_exponent(phi, delta, 1.0);
    EXPECT_NEAR(std::abs(d.multipliers[0] * d.multipliers[1] - 1.0), 0.0, 1e-8);
  }
  // Negative delta well inside the first stability band.
  EXPECT_THROW(floquet_exponent(Profile::fourier(FourierSeries{1.0, 0.0, {}, {}}), -4.0, 1.0), Error);
}

TEST(Dilational, WitnessMatchesClosedForms) {
  const DilationalWitness& w = dilational5();
  const double q = (3.0 + std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR(w.q, q, 1e-15);
  const auto& cert = *w.cert;
  // sigma spectrum from Eigen against q^{E(i)}.
  const Mat s = sigma_matrix_on_E(cert.spec, cert.gamma.sigma);
  const Eigen::VectorXcd ev = s.eigenvalues();
  std::vector<double> got;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    EXPECT_LT(std::abs(ev(i).imag()), 1e-9 * std::abs(ev(i)));
    got.push_back(ev(i).real());
  }
  std::vector<double> expect;
  for (int e : w.system.e) expect.push_back(std::pow(q, e));
  std::sort(got.begin(), got.end());
  std::sort(expect.begin(), expect.end());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_LT(rel(got[i], expect[i]), 1e-6);

  // C_gamma in the lattice basis, recomputed here.
  const Mat cg = c_gamma_matrix(cert);
  const Mat z = cert.lattice.basis.fullPivLu().solve(cg * cert.lattice.basis);
  double worst = 0.0;
  const IntMatrix zi = round_matrix(z, &worst);
  EXPECT_LT(worst, 1e-6);
  EXPECT_EQ(characteristic_polynomial(zi), poly_multiply({1, -3, 1}, {1, -18, 1}));
  EXPECT_EQ(abs(bareiss_determinant(zi)), 1);

  EXPECT_TRUE(cert.checks.all_passed());
  EXPECT_EQ(cert.lattice.theta, 0.0);
  const Classification c = classify_quotient(cert);
  EXPECT_EQ(c.type, SigmaKind::Dilational);
  EXPECT_FALSE(c.complete);
  EXPECT_EQ(c.fiber, "torus");
}

TEST(Dilational, SevenDimensions) {
  const DilationalWitness w = build_dilational(7, 4);
  EXPECT_EQ(w.system.m, 5);
  EXPECT_EQ(w.system.k, 7);
  EXPECT_TRUE(w.cert->checks.all_passed());
}

TEST(Dilational, RejectsBadInput) {
  EXPECT_THROW(build_dilational(6, 3), Error);
  EXPECT_THROW(build_dilational(5, 2), Error);
}

TEST(Translational, WitnessMatchesClosedForms) {
  const TranslationalWitness& w = translational5();
  const auto& cert = w.cert;
  const double p = cert.gamma.sigma.p;
  const int m = cert.spec.m();
  // exp(-integral of b_i over a period) against the polynomial's roots.
  std::vector<double> mult;
  for (int i = 0; i < m; ++i) {
    const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return w.b.value(t)(i, i); }, 0.0, p, 12, 1e-12);
    mult.push_back(std::exp(-integral));
  }
  std::sort(mult.begin(), mult.end());
  ASSERT_EQ(w.theta_matrix.eigenvalues.size(), static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) EXPECT_LT(rel(mult[i], w.theta_matrix.eigenvalues[i]), 1e-6);

  // Traceless part of B' + B^2 is constant and nonzero; the trace is not.
  Mat first;
  double tr_lo = 1e300;
  double tr_hi = -1e300;
  for (int k = 0; k < 97; ++k) {
    const double t = p * k / 97.0;
    const Mat b = w.b.value(t);
    const Mat r = w.b.derivative(t) + b * b;
    const double tr = r.trace();
    const Mat traceless = r - tr / m * Mat::Identity(m, m);
    if (k == 0) first = traceless;
    EXPECT_LT((traceless - first).cwiseAbs().maxCoeff(), 1e-6) << "t = " << t;
    tr_lo = std::min(tr_lo, tr);
    tr_hi = std::max(tr_hi, tr);
  }
  EXPECT_GT(first.cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_GT(tr_hi - tr_lo, 1e-2);

  EXPECT_TRUE(cert.checks.all_passed());
  EXPECT_EQ(cert.lattice.theta, 1.0);
  EXPECT_NEAR(w.audit.theta_found, 1.0, 1e-9);
  const Classification c = classify_quotient(cert);
  EXPECT_EQ(c.type, SigmaKind::Translational);
  EXPECT_TRUE(c.complete);
  EXPECT_EQ(c.fiber, "torus");
}

TEST(Translational, ZeroSeedIsConstantTrace) {
  TranslationalOptions o;
  o.seed_amplitude = 0.0;
  try {
    build_translational(5, validate_charpoly({-1, 5, -6, 1}), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConstantTrace);
  }
}
