#include "ecs/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ecs/error.hpp"

namespace ecs {

namespace {

void require_time(const PlaneWaveSpec& spec, double t) {
  if (!spec.interval().contains(t) || !spec.profile().defined_at(t)) {
    throw Error(ErrorCode::IntervalViolation, "time " + std::to_string(t) + " is outside I");
  }
}

Mat orthonormal_columns(const Mat& basis) {
  Eigen::HouseholderQR<Mat> qr(basis);
  return qr.householderQ() * Mat::Identity(basis.rows(), basis.cols());
}

double min_singular(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().size() ? svd.singularValues().tail(1)(0) : 0.0;
}

double max_singular(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

// Hermite basis on [0, 1] and its antiderivatives from 0.
struct Hermite {
  double h00, h10, h01, h11;
};

Hermite hermite(double s) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return {2 * s3 - 3 * s2 + 1, s3 - 2 * s2 + s, -2 * s3 + 3 * s2, s3 - s2};
}

Hermite hermite_derivative(double s) {
  const double s2 = s * s;
  return {6 * s2 - 6 * s, 3 * s2 - 4 * s + 1, -6 * s2 + 6 * s, 3 * s2 - 2 * s};
}

Hermite hermite_integral(double s) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double s4 = s3 * s;
  return {s4 / 2 - s3 + s, s4 / 4 - 2 * s3 / 3 + s2 / 2, -s4 / 2 + s3, s4 / 4 - s3 / 3};
}

struct Located {
  std::size_t segment;
  double s;       // local parameter in [0, 1]
  double h;       // segment width
  double cycles;  // whole periods between t and the first node
};

Located locate(const SampledCurve& c, double t) {
  const double t0 = c.nodes.front();
  double cycles = 0.0;
  double local = t;
  if (c.period) {
    cycles = std::floor((t - t0) / *c.period);
    local = t - cycles * *c.period;
  } else if (t < t0 - 1e-12 || t > c.nodes.back() + 1e-12) {
    throw Error(ErrorCode::OutOfInterval, "sampled curve evaluated outside its grid");
  }
  const auto it = std::upper_bound(c.nodes.begin(), c.nodes.end(), local);
  std::size_t i = it == c.nodes.begin() ? 0 : static_cast<std::size_t>(it - c.nodes.begin()) - 1;
  i = std::min(i, c.nodes.size() - 2);
  const double h = c.nodes[i + 1] - c.nodes[i];
  return {i, std::clamp((local - c.nodes[i]) / h, 0.0, 1.0), h, cycles};
}

// Antiderivative of tr B from the first node.
double sampled_trace_primitive(const SampledCurve& c, double t) {
  const auto seg_integral = [&c](std::size_t i, double s) {
    const double h = c.nodes[i + 1] - c.nodes[i];
    const Hermite w = hermite_integral(s);
    return h * (w.h00 * c.values[i].trace() + h * w.h10 * c.derivatives[i].trace() +
                w.h01 * c.values[i + 1].trace() + h * w.h11 * c.derivatives[i + 1].trace());
  };
  const Located loc = locate(c, t);
  double acc = 0.0;
  for (std::size_t i = 0; i < loc.segment; ++i) acc += seg_integral(i, 1.0);
  acc += seg_integral(loc.segment, loc.s);
  if (c.period && loc.cycles != 0.0) {
    double full = 0.0;
    for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i) full += seg_integral(i, 1.0);
    acc += loc.cycles * full;
  }
  return acc;
}

std::vector<double> riccati_samples(const PlaneWaveSpec& spec, const RiccatiCurve& b, int count) {
  std::vector<double> ts;
  const double denom = count > 1 ? count - 1.0 : 1.0;
  if (auto dom = b.domain()) {
    for (int i = 0; i < count; ++i) ts.push_back(dom->first + (dom->second - dom->first) * i / denom);
    return ts;
  }
  if (auto per = b.period()) {
    const double t0 = spec.interval().base_time();
    for (int i = 0; i < count; ++i) ts.push_back(t0 + *per * i / denom);
    return ts;
  }
  return spec.sample_times(count);
}

}  // namespace

SolutionVector SolutionVector::zero(int m, double base_t) {
  return {base_t, Vec::Zero(m), Vec::Zero(m)};
}

SolutionVector SolutionVector::from_state(double base_t, const Vec& state) {
  const auto m = state.size() / 2;
  return {base_t, state.head(m), state.tail(m)};
}

Vec SolutionVector::state() const {
  Vec y(value.size() + velocity.size());
  y << value, velocity;
  return y;
}

SecondOrderSystem solution_system(const PlaneWaveSpec& spec) {
  SecondOrderSystem sys;
  sys.m = spec.m();
  sys.potential = [spec](double t) { return spec.potential(t); };
  const Profile profile = spec.profile();
  sys.max_step = [profile](double t) { return profile.max_step(t); };
  return sys;
}

Mat flow(const PlaneWaveSpec& spec, double t0, double t1) {
  require_time(spec, t0);
  require_time(spec, t1);
  const int m = spec.m();
  return propagate(solution_system(spec), Mat::Identity(2 * m, 2 * m), t0, t1);
}

SolutionVector transport(const PlaneWaveSpec& spec, const SolutionVector& u, double t) {
  if (u.value.size() != spec.m() || u.velocity.size() != spec.m()) {
    throw Error(ErrorCode::DimensionMismatch, "solution vector has wrong dim");
  }
  require_time(spec, u.base_t);
  require_time(spec, t);
  const Mat y = propagate(solution_system(spec), u.state(), u.base_t, t);
  return SolutionVector::from_state(t, y.col(0));
}

Mat omega_matrix(const PseudoSpace& space) {
  const int m = space.dim();
  Mat j = Mat::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m) = -space.gram();
  j.bottomLeftCorner(m, m) = space.gram();
  return j;
}

double omega(const PlaneWaveSpec& spec, const SolutionVector& u, const SolutionVector& w) {
  const SolutionVector wt = w.base_t == u.base_t ? w : transport(spec, w, u.base_t);
  const auto& space = spec.space();
  return space.inner(u.velocity, wt.value) - space.inner(u.value, wt.velocity);
}

Mat sigma_matrix_on_E(const PlaneWaveSpec& spec, const SigmaElement& sigma,
                      std::optional<double> base_t) {
  const double t = base_t.value_or(spec.interval().base_time());
  const int m = spec.m();
  if (sigma.c.rows() != m || sigma.c.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "C must be m x m");
  }
  const Mat phi = flow(spec, t, sigma.act_inverse(t));
  Mat scale = Mat::Zero(2 * m, 2 * m);
  scale.topLeftCorner(m, m) = sigma.c;
  scale.bottomRightCorner(m, m) = sigma.c / sigma.q;
  return scale * phi;
}

SolutionVector apply_sigma(const PlaneWaveSpec& spec, const SigmaElement& sigma,
                           const SolutionVector& u) {
  const SolutionVector back = transport(spec, u, sigma.act_inverse(u.base_t));
  return {u.base_t, sigma.c * back.value, sigma.c * back.velocity / sigma.q};
}

Subspace::Subspace(double base_t, Mat basis) : base_t_(base_t), basis_(std::move(basis)) {
  if (basis_.rows() % 2 != 0 || basis_.cols() == 0 || basis_.cols() > basis_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "subspace basis must be 2m x k with 0 < k <= 2m");
  }
  if (min_singular(basis_) <= 1e-8 * max_singular(basis_)) {
    throw Error(ErrorCode::DimensionMismatch, "subspace basis is linearly dependent");
  }
}

SolutionVector Subspace::vector(int i) const {
  return SolutionVector::from_state(base_t_, basis_.col(i));
}

Subspace transport(const PlaneWaveSpec& spec, const Subspace& l, double t) {
  require_time(spec, l.base_t());
  require_time(spec, t);
  return Subspace(t, propagate(solution_system(spec), l.basis(), l.base_t(), t));
}

RiccatiCurve::RiccatiCurve(Kind kind) : kind_(std::move(kind)) {
  if (const auto* s = std::get_if<SampledCurve>(&kind_)) {
    if (s->nodes.size() < 2 || s->values.size() != s->nodes.size() ||
        s->derivatives.size() != s->nodes.size()) {
      throw Error(ErrorCode::DimensionMismatch, "sampled curve needs matching node data");
    }
    if (!std::is_sorted(s->nodes.begin(), s->nodes.end())) {
      throw Error(ErrorCode::InvalidSpec, "sampled curve nodes must increase");
    }
    if (s->period && std::abs(s->nodes.back() - s->nodes.front() - *s->period) > 1e-9 * *s->period) {
      throw Error(ErrorCode::InvalidSpec, "periodic nodes must span exactly one period");
    }
  }
  if (const auto* f = std::get_if<FourierDiagonal>(&kind_)) {
    if (f->entries.empty()) throw Error(ErrorCode::DimensionMismatch, "no Fourier entries");
    for (const auto& e : f->entries) {
      if (e.period != f->entries.front().period) {
        throw Error(ErrorCode::InvalidSpec, "Fourier entries need a common period");
      }
    }
  }
}

int RiccatiCurve::dim() const {
  return std::visit(
      [](const auto& k) -> int {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantDiagonal>) {
          return static_cast<int>(k.entries.size());
        } else if constexpr (std::is_same_v<T, FourierDiagonal>) {
          return static_cast<int>(k.entries.size());
        } else {
          return static_cast<int>(k.values.front().rows());
        }
      },
      kind_);
}

Mat RiccatiCurve::value(double t) const {
  return std::visit(
      [t](const auto& k) -> Mat {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantDiagonal>) {
          return k.entries.asDiagonal();
        } else if constexpr (std::is_same_v<T, FourierDiagonal>) {
          Vec d(static_cast<Eigen::Index>(k.entries.size()));
          for (std::size_t i = 0; i < k.entries.size(); ++i) d(static_cast<Eigen::Index>(i)) = k.entries[i].value(t);
          return d.asDiagonal();
        } else {
          const Located loc = locate(k, t);
          const Hermite w = hermite(loc.s);
          const std::size_t i = loc.segment;
          return w.h00 * k.values[i] + loc.h * w.h10 * k.derivatives[i] + w.h01 * k.values[i + 1] +
                 loc.h * w.h11 * k.derivatives[i + 1];
        }
      },
      kind_);
}

Mat RiccatiCurve::derivative(double t) const {
  return std::visit(
      [t](const auto& k) -> Mat {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantDiagonal>) {
          return Mat::Zero(k.entries.size(), k.entries.size());
        } else if constexpr (std::is_same_v<T, FourierDiagonal>) {
          Vec d(static_cast<Eigen::Index>(k.entries.size()));
          for (std::size_t i = 0; i < k.entries.size(); ++i) d(static_cast<Eigen::Index>(i)) = k.entries[i].derivative(t);
          return d.asDiagonal();
        } else {
          const Located loc = locate(k, t);
          const Hermite w = hermite_derivative(loc.s);
          const std::size_t i = loc.segment;
          return (w.h00 * k.values[i] + w.h01 * k.values[i + 1]) / loc.h + w.h10 * k.derivatives[i] +
                 w.h11 * k.derivatives[i + 1];
        }
      },
      kind_);
}

double RiccatiCurve::trace_integral(double a, double b) const {
  if (const auto* s = std::get_if<SampledCurve>(&kind_)) {
    return sampled_trace_primitive(*s, b) - sampled_trace_primitive(*s, a);
  }
  if (const auto* c = std::get_if<ConstantDiagonal>(&kind_)) return c->entries.sum() * (b - a);
  const auto tr = [this](double t) { return value(t).trace(); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(tr, a, b, 15, 1e-14);
}

std::optional<std::pair<double, double>> RiccatiCurve::domain() const {
  if (const auto* s = std::get_if<SampledCurve>(&kind_)) {
    if (!s->period) return std::make_pair(s->nodes.front(), s->nodes.back());
  }
  return std::nullopt;
}

std::optional<double> RiccatiCurve::period() const {
  if (const auto* s = std::get_if<SampledCurve>(&kind_)) return s->period;
  if (const auto* f = std::get_if<FourierDiagonal>(&kind_)) return f->entries.front().period;
  return std::nullopt;
}

std::string RiccatiCurve::kind_name() const {
  switch (kind_.index()) {
    case 0: return "constant_diagonal";
    case 1: return "fourier_diagonal";
    default: return "sampled";
  }
}

double riccati_residual(const PlaneWaveSpec& spec, const RiccatiCurve& b, int samples) {
  if (b.dim() != spec.m()) throw Error(ErrorCode::DimensionMismatch, "B must be m x m");
  double worst = 0.0;
  for (double t : riccati_samples(spec, b, samples)) {
    const Mat bt = b.value(t);
    const Mat r = b.derivative(t) + bt * bt - spec.potential(t);
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

Subspace riccati_basis(const PlaneWaveSpec& spec, const RiccatiCurve& b, std::optional<double> base_t) {
  const double res = riccati_residual(spec, b);
  const double bound = tol(1e-6) * (1.0 + spec.a().norm());
  if (!(res < bound)) {
    throw Error(ErrorCode::ResidualTooLarge,
                "B' + B^2 - f - A has residual " + std::to_string(res));
  }
  const double t = base_t.value_or(spec.interval().base_time());
  const int m = spec.m();
  Mat basis(2 * m, m);
  basis.topRows(m) = Mat::Identity(m, m);
  basis.bottomRows(m) = b.value(t);
  return Subspace(t, basis);
}

Mat recover_b(const PlaneWaveSpec& spec, const Subspace& l, double t) {
  const int m = spec.m();
  if (l.m() != m || l.dim() != m) throw Error(ErrorCode::DimensionMismatch, "need dim L = m");
  const Mat y = transport(spec, l, t).basis();
  const Mat x = y.topRows(m);
  if (min_singular(x) <= 1e-6 * max_singular(y)) {
    throw Error(ErrorCode::NondegenerateCheckFailed, "evaluation map is singular at t = " + std::to_string(t));
  }
  return x.transpose().partialPivLu().solve(y.bottomRows(m).transpose()).transpose();
}

RiccatiCurve riccati_from_subspace(const PlaneWaveSpec& spec, const Subspace& l, double t0,
                                   double t1, int intervals, std::optional<double> period) {
  const int m = spec.m();
  SampledCurve c;
  c.period = period;
  std::vector<double> nodes;
  for (int i = 0; i <= intervals; ++i) nodes.push_back(t0 + (t1 - t0) * i / intervals);
  require_time(spec, l.base_t());
  for (double t : nodes) require_time(spec, t);
  const Subspace start = transport(spec, l, t0);
  const auto states = propagate_through(solution_system(spec), start.basis(), t0, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Mat& y = states[i];
    const Mat x = y.topRows(m);
    if (min_singular(x) <= 1e-6 * max_singular(y)) {
      throw Error(ErrorCode::NondegenerateCheckFailed, "L is not first order on the grid");
    }
    const Mat b = x.transpose().partialPivLu().solve(y.bottomRows(m).transpose()).transpose();
    c.values.push_back(b);
    c.derivatives.push_back(spec.potential(nodes[i]) - b * b);
  }
  c.nodes = std::move(nodes);
  return RiccatiCurve(std::move(c));
}

std::vector<double> first_order_grid(const PlaneWaveSpec& spec, const SigmaElement* sigma, int count) {
  const double t0 = spec.interval().base_time();
  if (sigma != nullptr) {
    const double t1 = sigma->act(t0);
    if (std::abs(t1 - t0) > 1e-12 && spec.interval().contains(t1)) {
      std::vector<double> ts;
      for (int i = 0; i < count; ++i) ts.push_back(t0 + (t1 - t0) * i / (count - 1.0));
      return ts;
    }
  }
  return spec.sample_times(count);
}

CheckReport subspace_checks(const PlaneWaveSpec& spec, const Subspace& l, const SigmaElement* sigma,
                            const RiccatiCurve* b) {
  const int m = spec.m();
  if (l.m() != m) throw Error(ErrorCode::DimensionMismatch, "subspace lives in another E");
  if (l.dim() != m) throw Error(ErrorCode::DimensionMismatch, "need dim L = m");
  CheckReport report;
  const Mat q = orthonormal_columns(l.basis());

  // (a) evaluation maps on a grid, for the orthonormalised basis
  double worst_sv = std::numeric_limits<double>::infinity();
  auto grid = first_order_grid(spec, sigma);
  std::sort(grid.begin(), grid.end());
  const auto states = propagate_through(solution_system(spec), q, l.base_t(), grid);
  for (const Mat& y : states) {
    worst_sv = std::min(worst_sv, min_singular(y.topRows(m)) / std::max(1.0, max_singular(y)));
  }
  report.above("first_order", worst_sv, 1e-6 / tolerance_scale(),
               "min singular value of the evaluation map");

  // (b)
  const Mat om = q.transpose() * omega_matrix(spec.space()) * q;
  const auto& lag = report.below("lagrangian", om.cwiseAbs().maxCoeff(), tol(1e-8),
                                 "max |Omega(u_i, u_j)| over an orthonormal basis");

  // (c)
  const CheckResult* inv = nullptr;
  if (sigma != nullptr) {
    const Mat sq = sigma_matrix_on_E(spec, *sigma, l.base_t()) * q;
    const Mat off = sq - q * (q.transpose() * sq);
    inv = &report.below("sigma_invariant", off.norm() / sq.norm(), tol(1e-8),
                        "relative component of sigma L orthogonal to L");
  }
  const bool lag_passed = lag.passed;
  const bool inv_passed = inv != nullptr && inv->passed;

  // (d) the same properties read off B
  if (b != nullptr) {
    const Mat& g = spec.space().gram();
    double sa = 0.0;
    for (double t : riccati_samples(spec, *b, 32)) {
      const Mat bt = b->value(t);
      sa = std::max(sa, (g * bt - (g * bt).transpose()).cwiseAbs().maxCoeff() / (1.0 + bt.norm()));
    }
    const auto& self_adj = report.below("riccati_self_adjoint", sa, tol(1e-8));
    report.add({"lagrangian_matches_b", self_adj.passed == lag_passed, 0.0, 0.0,
                "Lagrangian iff B self-adjoint"});
    if (sigma != nullptr) {
      double eq = 0.0;
      const Mat cinv = sigma->c.inverse();
      const auto dom = b->domain();
      for (double t : riccati_samples(spec, *b, 32)) {
        const double st = sigma->act(t);
        if (dom && (st < dom->first || st > dom->second)) continue;
        if (!spec.interval().contains(st)) continue;
        const Mat want = sigma->c * b->value(t) * cinv / sigma->q;
        eq = std::max(eq, (b->value(st) - want).cwiseAbs().maxCoeff() / (1.0 + want.norm()));
      }
      const auto& equiv = report.below("riccati_equivariant", eq, tol(1e-6));
      report.add({"invariance_matches_b", equiv.passed == inv_passed, 0.0, 0.0,
                  "sigma-invariant iff B(sigma t) = q^-1 C B(t) C^-1"});
    }
  }
  return report;
}

Mat restriction_matrix(const PlaneWaveSpec& spec, const Subspace& l, const SigmaElement& sigma,
                       double tolerance) {
  const Mat sb = sigma_matrix_on_E(spec, sigma, l.base_t()) * l.basis();
  const Mat m = l.basis().colPivHouseholderQr().solve(sb);
  const double res = (sb - l.basis() * m).norm() / sb.norm();
  if (!(res < tol(tolerance))) {
    throw Error(ErrorCode::NotInvariant, "sigma L leaves L, residual " + std::to_string(res));
  }
  return m;
}

double DetRestriction::relative_error() const {
  return std::abs(formula - direct) / std::abs(direct);
}

DetRestriction det_restriction(const PlaneWaveSpec& spec, const RiccatiCurve& b,
                               const SigmaElement& sigma) {
  const Subspace l = riccati_basis(spec, b);
  const double t0 = l.base_t();
  DetRestriction out;
  out.direct = restriction_matrix(spec, l, sigma).determinant();
  out.formula = sigma.c.determinant() * std::exp(-b.trace_integral(t0, sigma.act(t0)));
  return out;
}

}  // namespace ecs
