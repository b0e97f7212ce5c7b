#include "ecs/planewave.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <string_view>

#include "ecs/error.hpp"

namespace ecs {

namespace {

constexpr int kNonconstantSamples = 64;

void mix(std::uint64_t& h, double x) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &x, sizeof(bits));
  // FNV-1a over the eight bytes.
  for (int i = 0; i < 8; ++i) {
    h ^= (bits >> (8 * i)) & 0xffU;
    h *= 1099511628211ULL;
  }
}

void mix(std::uint64_t& h, const Mat& m) {
  mix(h, static_cast<double>(m.rows()));
  mix(h, static_cast<double>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) mix(h, m(i, j));
}

void mix(std::uint64_t& h, const std::vector<double>& xs) {
  mix(h, static_cast<double>(xs.size()));
  for (double x : xs) mix(h, x);
}

std::uint64_t hash_spec(const PseudoSpace& space, const Mat& a, const Interval& interval,
                        const Profile& profile) {
  std::uint64_t h = 14695981039346656037ULL;
  mix(h, space.gram());
  mix(h, a);
  mix(h, static_cast<double>(static_cast<int>(interval.kind())));
  mix(h, interval.lo());
  mix(h, interval.hi());
  mix(h, static_cast<double>(profile.kind().index()));
  std::visit(
      [&h](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, InverseSquareProfile>) {
          mix(h, p.coeff);
          mix(h, p.pole);
        } else if constexpr (std::is_same_v<T, FourierProfile>) {
          mix(h, p.series.period);
          mix(h, p.series.a0);
          mix(h, p.series.cos);
          mix(h, p.series.sin);
        } else {
          mix(h, p.coeff);
          mix(h, p.ratio);
          mix(h, p.cos);
          mix(h, p.sin);
        }
      },
      profile.kind());
  return h;
}

}  // namespace

Interval Interval::open(double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidSpec, "interval needs lo < hi");
  if (lo == -kInf && hi == kInf) return real();
  if (lo == 0.0 && hi == kInf) return positive();
  return Interval(Kind::Open, lo, hi);
}

double Interval::base_time() const {
  switch (kind_) {
    case Kind::Real: return 0.0;
    case Kind::Positive: return 1.0;
    case Kind::Open: break;
  }
  if (std::isinf(lo_)) return hi_ - 1.0;
  if (std::isinf(hi_)) return lo_ + 1.0;
  return 0.5 * (lo_ + hi_);
}

bool Interval::maps_onto_itself(double q, double p) const {
  if (q == 0.0 || !std::isfinite(q) || !std::isfinite(p)) return false;
  // Endpoints of the image, respecting orientation.
  const auto image = [&](double x) { return std::isinf(x) ? (q > 0 ? x : -x) : q * x + p; };
  double a = image(lo_);
  double b = image(hi_);
  if (q < 0) std::swap(a, b);
  const auto close = [](double x, double y) {
    if (std::isinf(x) || std::isinf(y)) return x == y;
    return std::abs(x - y) <= 1e-12 * (1.0 + std::abs(x) + std::abs(y));
  };
  return close(a, lo_) && close(b, hi_);
}

PlaneWaveSpec::PlaneWaveSpec(PseudoSpace space, Mat a, Interval interval, Profile profile,
                             bool validated)
    : space_(std::move(space)),
      a_(std::move(a)),
      interval_(interval),
      profile_(std::move(profile)),
      validated_(validated) {
  fingerprint_ = hash_spec(space_, a_, interval_, profile_);
}

PlaneWaveSpec PlaneWaveSpec::unchecked(PseudoSpace space, Mat a, Interval interval,
                                       Profile profile) {
  if (a.rows() != space.dim() || a.cols() != space.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "A must match dim V");
  }
  if (const auto* inv = std::get_if<InverseSquareProfile>(&profile.kind())) {
    if (interval.contains(inv->pole)) {
      throw Error(ErrorCode::InvalidProfile, "inverse-square pole lies inside I");
    }
  }
  if (std::holds_alternative<LogPeriodicProfile>(profile.kind()) && interval.lo() < 0.0) {
    throw Error(ErrorCode::InvalidProfile, "log-periodic profile needs I inside (0, inf)");
  }
  return PlaneWaveSpec(std::move(space), std::move(a), interval, std::move(profile), false);
}

PlaneWaveSpec PlaneWaveSpec::make(PseudoSpace space, Mat a, Interval interval, Profile profile) {
  if (space.dim() < 2) throw Error(ErrorCode::InvalidSpec, "n = dim V + 2 must be at least 4");
  check_operator(space, a);
  PlaneWaveSpec spec = unchecked(std::move(space), std::move(a), interval, std::move(profile));
  const auto ts = spec.sample_times(kNonconstantSamples);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  for (double t : ts) {
    const double v = spec.f(t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  const double mean = sum / static_cast<double>(ts.size());
  if (!(hi - lo > 1e-8 * (1.0 + std::abs(mean)))) {
    throw Error(ErrorCode::InvalidProfile, "f is constant on I");
  }
  spec.validated_ = true;
  return spec;
}

Mat PlaneWaveSpec::potential(double t) const {
  return f(t) * Mat::Identity(m(), m()) + a_;
}

std::vector<double> PlaneWaveSpec::sample_times(int count) const {
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(count));
  const double denom = count > 1 ? static_cast<double>(count - 1) : 1.0;
  switch (interval_.kind()) {
    case Interval::Kind::Real: {
      const double width = 2.0 * profile_.period().value_or(1.0);
      for (int i = 0; i < count; ++i) ts.push_back(-width + 2.0 * width * i / denom);
      break;
    }
    case Interval::Kind::Positive: {
      const double a = std::log(0.2);
      const double b = std::log(5.0);
      for (int i = 0; i < count; ++i) ts.push_back(std::exp(a + (b - a) * i / denom));
      break;
    }
    case Interval::Kind::Open: {
      double lo = interval_.lo();
      double hi = interval_.hi();
      if (std::isinf(lo)) lo = hi - 4.0;
      if (std::isinf(hi)) hi = lo + 4.0;
      const double w = hi - lo;
      for (int i = 0; i < count; ++i) ts.push_back(lo + w * (0.05 + 0.9 * i / denom));
      break;
    }
  }
  return ts;
}

void PlaneWaveSpec::require_in_interval(double t) const {
  if (!interval_.contains(t) || !profile_.defined_at(t)) {
    throw Error(ErrorCode::OutOfInterval, "t = " + std::to_string(t) + " is outside I");
  }
}

double kappa_at(const PlaneWaveSpec& spec, double t, const Vec& v) {
  spec.require_in_interval(t);
  const auto& space = spec.space();
  return spec.f(t) * space.inner(v, v) + space.inner(spec.a() * v, v);
}

Mat metric_unchecked(const PlaneWaveSpec& spec, double t, const Vec& v) {
  const int n = spec.n();
  const auto& space = spec.space();
  Mat g = Mat::Zero(n, n);
  g(0, 0) = spec.f(t) * space.inner(v, v) + space.inner(spec.a() * v, v);
  g(0, 1) = g(1, 0) = 0.5;
  g.bottomRightCorner(spec.m(), spec.m()) = space.gram();
  return g;
}

Mat metric_at(const PlaneWaveSpec& spec, const Point& p) {
  spec.require_in_interval(p.t);
  if (p.v.size() != spec.m()) throw Error(ErrorCode::DimensionMismatch, "point has wrong dim");
  return metric_unchecked(spec, p.t, p.v);
}

}  // namespace ecs
