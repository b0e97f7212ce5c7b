#include "ecs/quotient.hpp"

#include <cmath>
#include <sstream>

#include "ecs/error.hpp"

namespace ecs {

namespace {

bool same_sigma(const SigmaElement& a, const SigmaElement& b) {
  return a.q == b.q && a.p == b.p && a.c.rows() == b.c.rows() && a.c.cols() == b.c.cols() && a.c == b.c;
}

double min_sv_ratio(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

// Marks every named check as failed with the error text; used when a
// precondition of the computation itself throws.
void fail_all(CheckReport& r, std::initializer_list<const char*> names, const std::string& why) {
  for (const char* n : names) {
    r.add({n, false, std::numeric_limits<double>::infinity(), 0.0, why});
  }
}

std::string poly_string(const std::vector<BigInt>& c) {
  std::ostringstream os;
  for (std::size_t i = c.size(); i-- > 0;) {
    os << c[i] << (i ? "," : "");
  }
  return os.str();
}

}  // namespace

GSigmaElement g_sigma_compose(const PlaneWaveSpec& spec, const GSigmaElement& a,
                              const GSigmaElement& b) {
  if (!same_sigma(a.sigma, b.sigma)) throw Error(ErrorCode::SigmaMismatch, "elements use different sigma");
  const SigmaElement sk = a.sigma.power(a.k);
  const SolutionVector sb = apply_sigma(spec, sk, b.u);
  const SolutionVector sbt = transport(spec, sb, a.u.base_t);
  GSigmaElement out;
  out.k = a.k + b.k;
  out.r = a.r + std::pow(a.sigma.q, -a.k) * b.r - omega(spec, a.u, sbt);
  out.u = {a.u.base_t, a.u.value + sbt.value, a.u.velocity + sbt.velocity};
  out.sigma = a.sigma;
  return out;
}

Isometry g_sigma_to_isometry(const PlaneWaveSpec& spec, const GSigmaElement& g) {
  return Isometry::make(spec, g.sigma.power(g.k), g.r, g.u);
}

Point act_g_sigma(const PlaneWaveSpec& spec, const GSigmaElement& g, const Point& p) {
  spec.require_in_interval(p.t);
  const SigmaElement sk = g.sigma.power(g.k);
  const double t = sk.act(p.t);
  spec.require_in_interval(t);
  const SolutionVector u = transport(spec, g.u, t);
  const Vec cv = sk.c * p.v;
  Point out;
  out.t = t;
  out.s = -spec.space().inner(u.velocity, 2.0 * cv + u.value) + std::pow(g.sigma.q, -g.k) * p.s + g.r;
  out.v = cv + u.value;
  return out;
}

Point leaf_chart(const PlaneWaveSpec& spec, double t, double r, const SolutionVector& u) {
  const SolutionVector ut = transport(spec, u, t);
  return {t, r - spec.space().inner(ut.velocity, ut.value), ut.value};
}

std::string fiber_name(bool lagrangian) { return lagrangian ? "torus" : "nilmanifold"; }

Mat c_gamma_matrix(const QuotientCertificate& cert) {
  const auto& spec = cert.spec;
  const int k = cert.l.dim();
  // Least-squares restriction; invariance itself is judged by l_sigma_invariant.
  const Mat m = restriction_matrix(spec, cert.l, cert.gamma.sigma, std::numeric_limits<double>::infinity());
  const SolutionVector w = transport(spec, cert.gamma.u, cert.l.base_t());
  Eigen::RowVectorXd ow(k);
  for (int j = 0; j < k; ++j) ow(j) = omega(spec, w, cert.l.vector(j));
  Mat out = Mat::Zero(k + 1, k + 1);
  out(0, 0) = 1.0 / cert.gamma.sigma.q;
  out.block(0, 1, 1, k) = -2.0 * ow * m;
  out.bottomRightCorner(k, k) = m;
  return out;
}

CheckReport verify_certificate(const QuotientCertificate& cert, LatticeAudit* audit) {
  CheckReport r;
  const auto& spec = cert.spec;
  const int m = spec.m();

  try {
    check_operator(spec.space(), spec.a());
    r.add({"spec_operator", true, 0.0, 0.0, "A nonzero, traceless, self-adjoint"});
  } catch (const Error& e) {
    r.add({"spec_operator", false, 1.0, 0.0, e.what()});
  }
  try {
    (void)PlaneWaveSpec::make(spec.space(), spec.a(), spec.interval(), spec.profile());
    r.add({"spec_profile", true, 0.0, 0.0, "f nonconstant on I"});
  } catch (const Error& e) {
    const bool op = e.code() == ErrorCode::NotSelfAdjoint || e.code() == ErrorCode::NotTraceless ||
                    e.code() == ErrorCode::ZeroOperator;
    r.add({"spec_profile", op, op ? 0.0 : 1.0, 0.0, op ? "not reached" : e.what()});
  }
  if (cert.gamma.spec_id != spec.fingerprint()) {
    r.add({"gamma_spec", false, 1.0, 0.0, "gamma is bound to another spec"});
  }
  try {
    r.append(sigma_checks(spec, cert.gamma.sigma));
  } catch (const Error& e) {
    fail_all(r, {"sigma_isometry", "sigma_conformal", "sigma_interval", "sigma_profile"}, e.what());
  }

  // (1)
  if (cert.l.m() != m || cert.l.dim() != m) {
    fail_all(r, {"l_first_order", "l_sigma_invariant"}, "dim L must equal dim V");
    return r;
  }
  try {
    const CheckReport sub = subspace_checks(spec, cert.l, &cert.gamma.sigma);
    CheckResult fo = *sub.find("first_order");
    fo.name = "l_first_order";
    r.add(fo);
    CheckResult inv = *sub.find("sigma_invariant");
    inv.name = "l_sigma_invariant";
    r.add(inv);
  } catch (const Error& e) {
    fail_all(r, {"l_first_order", "l_sigma_invariant"}, e.what());
  }

  // (2)
  const Mat& bas = cert.lattice.basis;
  if (bas.rows() != m + 1 || bas.cols() != m + 1) {
    fail_all(r, {"lattice_full_rank", "lattice_invariant", "lattice_unimodular", "theta_intersection",
                 "omega_integral"},
             "lattice basis must be (m+1) x (m+1)");
    return r;
  }
  const auto& rank = r.above("lattice_full_rank", min_sv_ratio(bas), 1e-10 / tolerance_scale(),
                             "min/max singular value of the basis");
  if (!rank.passed) {
    fail_all(r, {"lattice_invariant", "lattice_unimodular", "theta_intersection", "omega_integral"},
             "lattice basis is degenerate");
    return r;
  }

  // (3)
  LatticeAudit local;
  LatticeAudit& au = audit != nullptr ? *audit : local;
  try {
    const Mat k = c_gamma_matrix(cert);
    const Mat zf = bas.partialPivLu().solve(k * bas);
    au.z = round_matrix(zf, &au.integrality);
    r.below("lattice_invariant", au.integrality, tol(1e-6), "distance of C_gamma to an integral matrix");
    au.determinant = bareiss_determinant(au.z);
    au.charpoly = characteristic_polynomial(au.z);
    const bool unimodular = au.determinant == 1 || au.determinant == -1;
    r.add({"lattice_unimodular", unimodular, std::abs(au.determinant.convert_to<double>()) - 1.0, 0.0,
           "det = " + au.determinant.str() + ", charpoly " + poly_string(au.charpoly)});
  } catch (const Error& e) {
    fail_all(r, {"lattice_invariant", "lattice_unimodular"}, e.what());
  }

  // (4) lattice vectors with zero L-part are eigenvectors of C_gamma for q^-1
  const double theta = cert.lattice.theta;
  const double q = cert.gamma.sigma.q;
  try {
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw Error(ErrorCode::InvalidSpec, "theta must be >= 0");
    if (std::abs(std::abs(q) - 1.0) > 1e-12) {
      // A unimodular integral matrix has no rational eigenvalue other than +-1.
      au.theta_found = 0.0;
    } else {
      if (au.z.rows() != m + 1) throw Error(ErrorCode::CertificateFailed, "no integral C_gamma matrix");
      const long long s = q > 0 ? 1 : -1;
      IntMatrix shifted = au.z;
      for (Eigen::Index i = 0; i < shifted.rows(); ++i) shifted(i, i) -= s;
      const auto ker = rational_kernel(to_rational(shifted));
      au.theta_found = 0.0;
      if (!ker.empty()) {
        const auto d = static_cast<Eigen::Index>(ker.size());
        Mat kmat(m + 1, d);
        for (Eigen::Index j = 0; j < d; ++j)
          for (int i = 0; i <= m; ++i) kmat(i, j) = ker[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].convert_to<double>();
        const Mat lpart = bas.bottomRows(m) * kmat;
        const Mat y = null_space(lpart, 1e-8);
        if (y.cols() > 1) throw Error(ErrorCode::CertificateFailed, "lattice meets R x {0} in rank > 1");
        if (y.cols() == 1) {
          Vec yv = y.col(0) / y.col(0).cwiseAbs().maxCoeff();
          std::vector<Rational> combo(static_cast<std::size_t>(m + 1), 0);
          for (Eigen::Index j = 0; j < d; ++j) {
            const Rational c = rationalize(yv(j));
            for (int i = 0; i <= m; ++i) combo[static_cast<std::size_t>(i)] += c * ker[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
          }
          const auto z = primitive_integer_vector(combo);
          Vec zf(m + 1);
          for (int i = 0; i <= m; ++i) zf(i) = z[static_cast<std::size_t>(i)].convert_to<double>();
          const Vec v = bas * zf;
          if (v.tail(m).norm() > 1e-8 * bas.norm() * zf.norm()) {
            throw Error(ErrorCode::CertificateFailed, "no exact lattice vector with zero L-part");
          }
          au.theta_found = std::abs(v(0));
        }
      }
    }
    const double dev = std::abs(au.theta_found - theta);
    std::ostringstream os;
    os << "theta found " << au.theta_found << ", declared " << theta;
    r.below("theta_intersection", dev / (1.0 + theta), tol(1e-8), os.str());
  } catch (const Error& e) {
    fail_all(r, {"theta_intersection"}, e.what());
  }

  // (5)
  const Mat j = omega_matrix(spec.space());
  const Mat u = cert.l.basis() * bas.bottomRows(m);
  const Mat om = u.transpose() * j * u;
  double res = 0.0;
  if (theta == 0.0) {
    const double scale = 1.0 + u.colwise().squaredNorm().maxCoeff();
    res = om.cwiseAbs().maxCoeff() / scale;
    r.below("omega_integral", res, tol(1e-8), "theta = 0 needs Omega = 0 on Lambda");
  } else {
    for (Eigen::Index a = 0; a < om.rows(); ++a)
      for (Eigen::Index b = 0; b < om.cols(); ++b) {
        const double x = om(a, b) / theta;
        res = std::max(res, std::abs(x - std::round(x)));
      }
    r.below("omega_integral", res, tol(1e-6), "Omega(Lambda, Lambda) in Z theta");
  }
  return r;
}

Classification classify_quotient(const QuotientCertificate& cert) {
  const SigmaKind kind = sigma_kind(cert.spec, cert.gamma.sigma);
  if (kind == SigmaKind::Other) {
    throw Error(ErrorCode::UnclassifiableSigma, "sigma is neither translational nor dilational");
  }
  const CheckReport sub = subspace_checks(cert.spec, cert.l, &cert.gamma.sigma);
  Classification c;
  c.type = kind;
  c.complete = cert.spec.interval().kind() == Interval::Kind::Real;
  c.fiber = fiber_name(sub.find("lagrangian")->passed);
  c.base_parameter = kind == SigmaKind::Translational ? std::abs(cert.gamma.sigma.p) : cert.gamma.sigma.q;
  return c;
}

}  // namespace ecs
