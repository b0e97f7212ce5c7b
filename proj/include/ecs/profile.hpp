#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ecs {

/// Finite real Fourier series
///   a0 + sum_k cos[k-1] cos(2 pi k t / period) + sin[k-1] sin(2 pi k t / period).
struct FourierSeries {
  double period = 1.0;
  double a0 = 0.0;
  std::vector<double> cos;
  std::vector<double> sin;

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  /// Mean over one period.
  double mean() const { return a0; }
  std::size_t harmonics() const { return std::max(cos.size(), sin.size()); }

  FourierSeries derivative() const;
  FourierSeries operator+(const FourierSeries& other) const;
  FourierSeries operator*(const FourierSeries& other) const;
  FourierSeries operator*(double scale) const;
  FourierSeries plus_constant(double c) const;

  static FourierSeries cosine(double period, double amplitude, int harmonic = 1);
};

/// coeff / (t - pole)^2, used on one side of the pole.
struct InverseSquareProfile {
  double coeff = 0.0;
  double pole = 0.0;
};

struct FourierProfile {
  FourierSeries series;
};

/// g(log t / log ratio) / t^2 with g = coeff + Fourier terms of period 1.
/// Satisfies ratio^2 f(ratio t) = f(t) for every choice of the Fourier terms.
struct LogPeriodicProfile {
  double coeff = 0.0;
  double ratio = 2.0;
  std::vector<double> cos;
  std::vector<double> sin;
};

class Profile {
 public:
  using Kind = std::variant<InverseSquareProfile, FourierProfile, LogPeriodicProfile>;

  Profile(Kind kind) : kind_(std::move(kind)) {}  // NOLINT(google-explicit-constructor)

  static Profile inverse_square(double coeff, double pole = 0.0) {
    return Profile(InverseSquareProfile{coeff, pole});
  }
  static Profile fourier(FourierSeries series) { return Profile(FourierProfile{std::move(series)}); }

  double value(double t) const;
  double derivative(double t) const;

  /// Whether f is smooth at t (false at or across an inverse-square pole).
  bool defined_at(double t) const;

  /// Step bound for integrating across t; +inf when unconstrained.
  double max_step(double t) const;

  std::optional<double> period() const;
  std::string kind_name() const;
  const Kind& kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace ecs
