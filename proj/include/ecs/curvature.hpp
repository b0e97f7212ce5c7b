#pragma once

#include <vector>

#include "ecs/planewave.hpp"

namespace ecs {

/// Dense rank-4 array indexed (a, b, c, d), all indices in 0..n-1.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
  double max_abs() const;
  double max_abs_difference(const Tensor4& other) const;
  Tensor4& operator-=(const Tensor4& other);
  Tensor4& operator*=(double s);

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_ = 0;
  std::vector<double> data_;
};

// Conventions. Coordinates are ordered (t, s, x^1..x^m). The curvature
// operator is R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
// and Ric(X,Y) = tr(Z -> R(Z,X)Y). Four-index tensors are stored as
// T(X,Y,Z,U) = g(T(X,Y)Z, U). The Weyl operator on bivectors sends X^Y to the
// bivector metrically dual to the 2-form W(X,Y,.,.); with these choices the
// images are W(dt ^ dj) = 2 ds ^ A dj without any sign flip.
inline constexpr int kWeylBivectorSign = +1;

/// Index of a basis bivector d_c ^ d_d (c < d) in the lexicographic list.
std::vector<std::pair<int, int>> bivector_basis(int n);

struct OlszakSpace {
  Mat basis;  // columns span D at the point
  int rank = 0;
};

struct CurvatureReport {
  Mat ricci;                      // Ric_ab
  double scalar = 0.0;
  Tensor4 weyl;                   // W(X,Y,Z,U) on coordinate fields
  std::vector<Mat> weyl_images;   // contravariant image of each basis bivector
  OlszakSpace olszak_brute;       // null space of the defining linear system
  OlszakSpace olszak_closed;      // span{d_s} (+ Im A when rank A = 1)
  bool olszak_agree = false;
  int manifold_rank = 0;          // 1 or 2
};

CurvatureReport closed_form_curvature(const PlaneWaveSpec& spec, const Point& p);

/// Weyl tensor of the closed form, in the storage convention above.
Tensor4 closed_form_weyl(const PlaneWaveSpec& spec);

/// Solves g(v,.) ^ W(v',v'',.,.) = 0 over all coordinate pairs (v',v'').
OlszakSpace olszak_brute_force(const Mat& metric, const Tensor4& weyl, double rel = 1e-9);

/// Contravariant bivector images W(d_c ^ d_d) for c < d.
std::vector<Mat> weyl_bivector_images(const Mat& metric, const Tensor4& weyl);

struct OracleOptions {
  double step = 1e-4;          // metric and Christoffel differencing
  double outer_step = 2e-3;    // differencing of curvature for covariant derivatives
  bool richardson = false;     // combine (h, h/2) to cancel the h^2 term
};

struct NumericCurvatureReport {
  Tensor4 riemann;  // R(X,Y,Z,U)
  Tensor4 weyl;
  Mat ricci;
  double scalar = 0.0;
  double weyl_norm = 0.0;            // max |W| component

  double ricci_residual = 0.0;       // max |Ric_num - Ric_closed|
  double weyl_residual = 0.0;        // max bivector-image difference
  double nabla_weyl = 0.0;           // max |nabla W|
  double nabla_riemann = 0.0;        // max |nabla R|
  double scalar_residual = 0.0;      // |scal|
  double weyl_trace = 0.0;           // max contraction of W
  double parallel_s_residual = 0.0;  // max |nabla d_s|
  double riemann_norm = 0.0;         // max |R| component
};

/// Finite-difference curvature computed from metric_at alone. Needs the
/// stencil (radius 4 * max step in t) inside I; throws StepTooLarge
/// otherwise and NondegenerateCheckFailed if the metric degenerates.
NumericCurvatureReport numeric_curvature_oracle(const PlaneWaveSpec& spec, const Point& p,
                                                const OracleOptions& options = {});

/// Christoffel symbols Gamma^a_{bc} by central differences, stored as
/// gamma[a](b, c).
std::vector<Mat> numeric_christoffel(const PlaneWaveSpec& spec, const Vec& x, double h);

}  // namespace ecs
