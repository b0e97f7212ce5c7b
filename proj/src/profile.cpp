#include "ecs/profile.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace ecs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Trig {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
};

Trig trig_sum(const std::vector<double>& cs, const std::vector<double>& ss, double phase) {
  Trig out;
  const std::size_t k_max = std::max(cs.size(), ss.size());
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double a = k <= cs.size() ? cs[k - 1] : 0.0;
    const double b = k <= ss.size() ? ss[k - 1] : 0.0;
    const double kk = static_cast<double>(k);
    const double c = std::cos(kk * phase);
    const double s = std::sin(kk * phase);
    out.value += a * c + b * s;
    out.first += kk * (-a * s + b * c);
    out.second += -kk * kk * (a * c + b * s);
  }
  return out;
}

// Complex coefficients c_k, k = -K..K, stored at index k + K.
std::vector<std::complex<double>> to_complex(const FourierSeries& f, std::size_t k_max) {
  std::vector<std::complex<double>> c(2 * k_max + 1);
  c[k_max] = f.a0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double a = k <= f.cos.size() ? f.cos[k - 1] : 0.0;
    const double b = k <= f.sin.size() ? f.sin[k - 1] : 0.0;
    c[k_max + k] = std::complex<double>(a / 2.0, -b / 2.0);
    c[k_max - k] = std::complex<double>(a / 2.0, b / 2.0);
  }
  return c;
}

}  // namespace

double FourierSeries::value(double t) const {
  return a0 + trig_sum(cos, sin, kTwoPi * t / period).value;
}

double FourierSeries::derivative(double t) const {
  return trig_sum(cos, sin, kTwoPi * t / period).first * (kTwoPi / period);
}

double FourierSeries::second_derivative(double t) const {
  const double w = kTwoPi / period;
  return trig_sum(cos, sin, kTwoPi * t / period).second * w * w;
}

FourierSeries FourierSeries::derivative() const {
  FourierSeries d{period, 0.0, {}, {}};
  const double w = kTwoPi / period;
  const std::size_t k_max = harmonics();
  d.cos.assign(k_max, 0.0);
  d.sin.assign(k_max, 0.0);
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double a = k <= cos.size() ? cos[k - 1] : 0.0;
    const double b = k <= sin.size() ? sin[k - 1] : 0.0;
    const double kw = static_cast<double>(k) * w;
    d.cos[k - 1] = kw * b;
    d.sin[k - 1] = -kw * a;
  }
  return d;
}

FourierSeries FourierSeries::operator+(const FourierSeries& other) const {
  FourierSeries r{period, a0 + other.a0, {}, {}};
  const std::size_t k_max = std::max(harmonics(), other.harmonics());
  r.cos.assign(k_max, 0.0);
  r.sin.assign(k_max, 0.0);
  for (std::size_t k = 0; k < k_max; ++k) {
    r.cos[k] = (k < cos.size() ? cos[k] : 0.0) + (k < other.cos.size() ? other.cos[k] : 0.0);
    r.sin[k] = (k < sin.size() ? sin[k] : 0.0) + (k < other.sin.size() ? other.sin[k] : 0.0);
  }
  return r;
}

FourierSeries FourierSeries::operator*(const FourierSeries& other) const {
  const std::size_t ka = harmonics();
  const std::size_t kb = other.harmonics();
  const auto ca = to_complex(*this, ka);
  const auto cb = to_complex(other, kb);
  const std::size_t kr = ka + kb;
  std::vector<std::complex<double>> cr(2 * kr + 1);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    for (std::size_t j = 0; j < cb.size(); ++j) {
      // index i - ka plus j - kb, shifted by kr
      cr[i + j + kr - ka - kb] += ca[i] * cb[j];
    }
  }
  FourierSeries r{period, cr[kr].real(), std::vector<double>(kr, 0.0), std::vector<double>(kr, 0.0)};
  for (std::size_t k = 1; k <= kr; ++k) {
    r.cos[k - 1] = 2.0 * cr[kr + k].real();
    r.sin[k - 1] = -2.0 * cr[kr + k].imag();
  }
  return r;
}

FourierSeries FourierSeries::operator*(double scale) const {
  FourierSeries r = *this;
  r.a0 *= scale;
  for (double& c : r.cos) c *= scale;
  for (double& s : r.sin) s *= scale;
  return r;
}

FourierSeries FourierSeries::plus_constant(double c) const {
  FourierSeries r = *this;
  r.a0 += c;
  return r;
}

FourierSeries FourierSeries::cosine(double period, double amplitude, int harmonic) {
  FourierSeries r{period, 0.0, std::vector<double>(static_cast<std::size_t>(harmonic), 0.0), {}};
  r.cos.back() = amplitude;
  return r;
}

double Profile::value(double t) const {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, InverseSquareProfile>) {
          const double d = t - p.pole;
          return p.coeff / (d * d);
        } else if constexpr (std::is_same_v<T, FourierProfile>) {
          return p.series.value(t);
        } else {
          const double x = std::log(t) / std::log(p.ratio);
          return (p.coeff + trig_sum(p.cos, p.sin, kTwoPi * x).value) / (t * t);
        }
      },
      kind_);
}

double Profile::derivative(double t) const {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, InverseSquareProfile>) {
          const double d = t - p.pole;
          return -2.0 * p.coeff / (d * d * d);
        } else if constexpr (std::is_same_v<T, FourierProfile>) {
          return p.series.derivative(t);
        } else {
          const double lr = std::log(p.ratio);
          const Trig g = trig_sum(p.cos, p.sin, kTwoPi * std::log(t) / lr);
          const double gv = p.coeff + g.value;
          const double gd = g.first * kTwoPi / lr;  // d g / d(log t)
          return (gd - 2.0 * gv) / (t * t * t);
        }
      },
      kind_);
}

bool Profile::defined_at(double t) const {
  return std::visit(
      [t](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, InverseSquareProfile>) {
          return std::isfinite(t) && t != p.pole;
        } else if constexpr (std::is_same_v<T, FourierProfile>) {
          return std::isfinite(t);
        } else {
          return std::isfinite(t) && t > 0.0;
        }
      },
      kind_);
}

double Profile::max_step(double t) const {
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, InverseSquareProfile>) {
          return std::abs(t - p.pole) / 4.0;
        } else if constexpr (std::is_same_v<T, FourierProfile>) {
          return std::numeric_limits<double>::infinity();
        } else {
          return t / 4.0;
        }
      },
      kind_);
}

std::optional<double> Profile::period() const {
  if (const auto* f = std::get_if<FourierProfile>(&kind_)) return f->series.period;
  return std::nullopt;
}

std::string Profile::kind_name() const {
  switch (kind_.index()) {
    case 0: return "inverse_square";
    case 1: return "fourier";
    default: return "log_periodic";
  }
}

}  // namespace ecs
