#include "ecs/curvature.hpp"

#include <cmath>
#include <functional>

#include "ecs/error.hpp"

namespace ecs {

double Tensor4::max_abs() const {
  double r = 0.0;
  for (double x : data_) r = std::max(r, std::abs(x));
  return r;
}

double Tensor4::max_abs_difference(const Tensor4& other) const {
  double r = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) r = std::max(r, std::abs(data_[i] - other.data_[i]));
  return r;
}

Tensor4& Tensor4::operator-=(const Tensor4& other) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Tensor4& Tensor4::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

std::vector<std::pair<int, int>> bivector_basis(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c < n; ++c)
    for (int d = c + 1; d < n; ++d) pairs.emplace_back(c, d);
  return pairs;
}

Tensor4 closed_form_weyl(const PlaneWaveSpec& spec) {
  const int n = spec.n();
  const Mat ga = spec.space().gram() * spec.a();
  Tensor4 w(n);
  constexpr int t = 0;
  for (int j = 0; j < spec.m(); ++j) {
    for (int k = 0; k < spec.m(); ++k) {
      const double x = ga(k, j);  // <A e_j, e_k>
      w(t, 2 + j, t, 2 + k) = x;
      w(2 + j, t, t, 2 + k) = -x;
      w(t, 2 + j, 2 + k, t) = -x;
      w(2 + j, t, 2 + k, t) = x;
    }
  }
  return w;
}

std::vector<Mat> weyl_bivector_images(const Mat& metric, const Tensor4& weyl) {
  const int n = weyl.dim();
  const Mat ginv = metric.inverse();
  std::vector<Mat> images;
  for (auto [a, b] : bivector_basis(n)) {
    Mat form(n, n);
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d) form(c, d) = weyl(a, b, c, d);
    images.push_back(kWeylBivectorSign * (ginv * form * ginv.transpose()));
  }
  return images;
}

OlszakSpace olszak_brute_force(const Mat& metric, const Tensor4& weyl, double rel) {
  const int n = weyl.dim();
  std::vector<Eigen::RowVectorXd> rows;
  for (int c = 0; c < n; ++c) {
    for (int d = c + 1; d < n; ++d) {
      // omega(Y, Z) = W(d_c, d_d, Y, Z); the 3-form xi ^ omega with xi = g(v, .)
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          for (int e = b + 1; e < n; ++e) {
            Eigen::RowVectorXd row(n);
            for (int f = 0; f < n; ++f) {
              row(f) = metric(a, f) * weyl(c, d, b, e) - metric(b, f) * weyl(c, d, a, e) +
                       metric(e, f) * weyl(c, d, a, b);
            }
            rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  Mat system(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) system.row(static_cast<Eigen::Index>(i)) = rows[i];
  OlszakSpace out;
  out.basis = null_space(system, rel);
  out.rank = static_cast<int>(out.basis.cols());
  return out;
}

CurvatureReport closed_form_curvature(const PlaneWaveSpec& spec, const Point& p) {
  const Mat g = metric_at(spec, p);
  const int n = spec.n();
  const int m = spec.m();
  CurvatureReport r;
  r.ricci = Mat::Zero(n, n);
  r.ricci(0, 0) = (2.0 - n) * spec.f(p.t);
  r.scalar = 0.0;
  r.weyl = closed_form_weyl(spec);
  r.weyl_images.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (auto [c, d] : bivector_basis(n)) {
    Mat img = Mat::Zero(n, n);
    if (c == 0 && d >= 2) {
      const Vec aj = spec.a().col(d - 2);
      for (int i = 0; i < m; ++i) {
        img(1, 2 + i) = 2.0 * aj(i);
        img(2 + i, 1) = -2.0 * aj(i);
      }
    }
    r.weyl_images.push_back(std::move(img));
  }
  r.olszak_brute = olszak_brute_force(g, r.weyl);

  const int rank_a = numeric_rank(spec.a());
  Mat closed = Mat::Zero(n, rank_a == 1 ? 2 : 1);
  closed(1, 0) = 1.0;
  if (rank_a == 1) {
    Eigen::JacobiSVD<Mat> svd(spec.a(), Eigen::ComputeFullU);
    closed.block(2, 1, m, 1) = svd.matrixU().col(0);
  }
  r.olszak_closed.basis = closed;
  r.olszak_closed.rank = static_cast<int>(closed.cols());

  Mat joint(n, r.olszak_brute.rank + r.olszak_closed.rank);
  joint << r.olszak_brute.basis, closed;
  r.olszak_agree = r.olszak_brute.rank == r.olszak_closed.rank &&
                   numeric_rank(joint, 1e-8) == r.olszak_closed.rank;
  r.manifold_rank = r.olszak_closed.rank;
  return r;
}

namespace {

using FlatFn = std::function<Vec(const Vec&)>;

Vec central(const FlatFn& fn, const Vec& x, int k, double h, bool richardson) {
  const auto diff = [&](double step) {
    Vec xp = x;
    Vec xm = x;
    xp(k) += step;
    xm(k) -= step;
    return Vec((fn(xp) - fn(xm)) / (2.0 * step));
  };
  if (!richardson) return diff(h);
  return (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
}

class Oracle {
 public:
  Oracle(const PlaneWaveSpec& spec, const OracleOptions& opt)
      : spec_(spec), opt_(opt), n_(spec.n()), m_(spec.m()) {}

  Vec metric_flat(const Vec& x) const {
    const Mat g = metric_unchecked(spec_, x(0), x.tail(m_));
    return Eigen::Map<const Vec>(g.data(), g.size());
  }

  Mat metric(const Vec& x) const { return metric_unchecked(spec_, x(0), x.tail(m_)); }

  // Gamma^a_{bc} at index (a * n + b) * n + c.
  Vec christoffel(const Vec& x) const {
    const FlatFn g_fn = [this](const Vec& y) { return metric_flat(y); };
    std::vector<Mat> dg;
    dg.reserve(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) {
      const Vec d = central(g_fn, x, k, opt_.step, opt_.richardson);
      dg.emplace_back(Eigen::Map<const Mat>(d.data(), n_, n_));
    }
    const Mat ginv = metric(x).inverse();
    Vec gamma = Vec::Zero(n_ * n_ * n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c) {
          double s = 0.0;
          for (int d = 0; d < n_; ++d) {
            s += ginv(a, d) * (dg[static_cast<std::size_t>(b)](d, c) +
                               dg[static_cast<std::size_t>(c)](d, b) -
                               dg[static_cast<std::size_t>(d)](b, c));
          }
          gamma((a * n_ + b) * n_ + c) = 0.5 * s;
        }
    return gamma;
  }

  double gam(const Vec& g, int a, int b, int c) const { return g((a * n_ + b) * n_ + c); }

  // R(d_a, d_b, d_c, d_d) = g(R(d_a, d_b) d_c, d_d), flattened.
  Vec riemann(const Vec& x) const {
    const FlatFn gamma_fn = [this](const Vec& y) { return christoffel(y); };
    std::vector<Vec> dgam;
    for (int k = 0; k < n_; ++k) dgam.push_back(central(gamma_fn, x, k, opt_.step, opt_.richardson));
    const Vec gamma = christoffel(x);
    const Mat g = metric(x);
    // R^e_{cab} = d_a G^e_{bc} - d_b G^e_{ac} + G^e_{af} G^f_{bc} - G^e_{bf} G^f_{ac}
    Vec up = Vec::Zero(n_ * n_ * n_ * n_);
    for (int e = 0; e < n_; ++e)
      for (int c = 0; c < n_; ++c)
        for (int a = 0; a < n_; ++a)
          for (int b = 0; b < n_; ++b) {
            double v = gam(dgam[static_cast<std::size_t>(a)], e, b, c) -
                       gam(dgam[static_cast<std::size_t>(b)], e, a, c);
            for (int f = 0; f < n_; ++f) {
              v += gam(gamma, e, a, f) * gam(gamma, f, b, c) - gam(gamma, e, b, f) * gam(gamma, f, a, c);
            }
            up(idx(e, c, a, b)) = v;
          }
    Vec low = Vec::Zero(up.size());
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          for (int d = 0; d < n_; ++d) {
            double v = 0.0;
            for (int e = 0; e < n_; ++e) v += g(d, e) * up(idx(e, c, a, b));
            low(idx(a, b, c, d)) = v;
          }
    return low;
  }

  Mat ricci_from(const Vec& r4, const Mat& ginv) const {
    Mat ric = Mat::Zero(n_, n_);
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c) {
        double v = 0.0;
        for (int a = 0; a < n_; ++a)
          for (int d = 0; d < n_; ++d) v += ginv(a, d) * r4(idx(a, b, c, d));
        ric(b, c) = v;
      }
    return ric;
  }

  Vec weyl_from(const Vec& r4, const Mat& g) const {
    const Mat ginv = g.inverse();
    const Mat ric = ricci_from(r4, ginv);
    const double scal = (ginv.cwiseProduct(ric)).sum();
    const double nn = static_cast<double>(n_);
    Vec w(r4.size());
    // Standard-index W_{dcab}, since the storage (a,b,c,d) holds R_{dcab}.
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          for (int d = 0; d < n_; ++d) {
            const double kn = ric(d, a) * g(c, b) - ric(d, b) * g(c, a) + ric(c, b) * g(d, a) -
                              ric(c, a) * g(d, b);
            const double gg = g(d, a) * g(c, b) - g(d, b) * g(c, a);
            w(idx(a, b, c, d)) =
                r4(idx(a, b, c, d)) - kn / (nn - 2.0) + scal * gg / ((nn - 1.0) * (nn - 2.0));
          }
    return w;
  }

  Vec weyl(const Vec& x) const { return weyl_from(riemann(x), metric(x)); }

  // max over e of |(nabla_e T)_{abcd}| for a covariant 4-tensor field.
  double nabla_max(const FlatFn& field, const Vec& x, const Vec& gamma) const {
    const Vec t0 = field(x);
    double worst = 0.0;
    for (int e = 0; e < n_; ++e) {
      const Vec dt = central(field, x, e, opt_.outer_step, opt_.richardson);
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
          for (int c = 0; c < n_; ++c)
            for (int d = 0; d < n_; ++d) {
              double v = dt(idx(a, b, c, d));
              for (int f = 0; f < n_; ++f) {
                v -= gam(gamma, f, e, a) * t0(idx(f, b, c, d)) + gam(gamma, f, e, b) * t0(idx(a, f, c, d)) +
                     gam(gamma, f, e, c) * t0(idx(a, b, f, d)) + gam(gamma, f, e, d) * t0(idx(a, b, c, f));
              }
              worst = std::max(worst, std::abs(v));
            }
    }
    return worst;
  }

  Tensor4 to_tensor(const Vec& flat) const {
    Tensor4 t(n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          for (int d = 0; d < n_; ++d) t(a, b, c, d) = flat(idx(a, b, c, d));
    return t;
  }

  int idx(int a, int b, int c, int d) const { return ((a * n_ + b) * n_ + c) * n_ + d; }

 private:
  const PlaneWaveSpec& spec_;
  OracleOptions opt_;
  int n_;
  int m_;
};

Vec coordinates(const Point& p) {
  Vec x(2 + p.v.size());
  x(0) = p.t;
  x(1) = p.s;
  x.tail(p.v.size()) = p.v;
  return x;
}

}  // namespace

std::vector<Mat> numeric_christoffel(const PlaneWaveSpec& spec, const Vec& x, double h) {
  OracleOptions opt;
  opt.step = h;
  const Oracle oracle(spec, opt);
  const Vec flat = oracle.christoffel(x);
  const int n = spec.n();
  std::vector<Mat> out(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out[static_cast<std::size_t>(a)](b, c) = flat((a * n + b) * n + c);
  return out;
}

NumericCurvatureReport numeric_curvature_oracle(const PlaneWaveSpec& spec, const Point& p,
                                                const OracleOptions& options) {
  spec.require_in_interval(p.t);
  if (p.v.size() != spec.m()) throw Error(ErrorCode::DimensionMismatch, "point has wrong dim");
  const double reach = 4.0 * std::max(options.step, options.outer_step);
  for (double t : {p.t - reach, p.t + reach}) {
    if (!spec.interval().contains(t) || !spec.profile().defined_at(t)) {
      throw Error(ErrorCode::StepTooLarge, "finite-difference stencil leaves I");
    }
  }
  const int n = spec.n();
  const Oracle oracle(spec, options);
  const Vec x = coordinates(p);
  const Mat g = oracle.metric(x);
  const Vec sv = Eigen::JacobiSVD<Mat>(g).singularValues();
  if (!(sv(n - 1) > 1e-12 * sv(0))) {
    throw Error(ErrorCode::NondegenerateCheckFailed, "metric degenerates at the point");
  }
  const Mat ginv = g.inverse();

  NumericCurvatureReport r;
  const Vec r4 = oracle.riemann(x);
  const Vec w4 = oracle.weyl_from(r4, g);
  r.riemann = oracle.to_tensor(r4);
  r.weyl = oracle.to_tensor(w4);
  r.ricci = oracle.ricci_from(r4, ginv);
  r.scalar = ginv.cwiseProduct(r.ricci).sum();
  r.weyl_norm = r.weyl.max_abs();
  r.riemann_norm = r.riemann.max_abs();

  Mat ric_closed = Mat::Zero(n, n);
  ric_closed(0, 0) = (2.0 - n) * spec.f(p.t);
  r.ricci_residual = (r.ricci - ric_closed).cwiseAbs().maxCoeff();
  r.scalar_residual = std::abs(r.scalar);

  const auto num_images = weyl_bivector_images(g, r.weyl);
  const auto closed = closed_form_curvature(spec, p);
  for (std::size_t i = 0; i < num_images.size(); ++i) {
    r.weyl_residual =
        std::max(r.weyl_residual, (num_images[i] - closed.weyl_images[i]).cwiseAbs().maxCoeff());
  }

  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double first = 0.0;
      double second = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          first += ginv(a, c) * r.weyl(a, b, c, d);
          second += ginv(a, c) * r.weyl(b, a, d, c);
        }
      r.weyl_trace = std::max({r.weyl_trace, std::abs(first), std::abs(second)});
    }

  const Vec gamma = oracle.christoffel(x);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) r.parallel_s_residual = std::max(r.parallel_s_residual, std::abs(oracle.gam(gamma, b, a, 1)));

  r.nabla_weyl = oracle.nabla_max([&oracle](const Vec& y) { return oracle.weyl(y); }, x, gamma);
  r.nabla_riemann = oracle.nabla_max([&oracle](const Vec& y) { return oracle.riemann(y); }, x, gamma);
  return r;
}

}  // namespace ecs
