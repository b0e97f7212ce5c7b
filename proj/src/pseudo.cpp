#include "ecs/pseudo.hpp"

#include <cmath>

#include "ecs/error.hpp"

namespace ecs {

namespace {

constexpr double kIdentityTol = 1e-12;
constexpr double kRankTol = 1e-10;

}  // namespace

PseudoSpace::PseudoSpace(Mat gram) : gram_(std::move(gram)) {
  if (gram_.rows() == 0 || gram_.rows() != gram_.cols()) {
    throw Error(ErrorCode::DegenerateGram, "gram must be a nonempty square matrix");
  }
  const double norm = gram_.norm();
  if (!gram_.allFinite() || (gram_ - gram_.transpose()).norm() > kIdentityTol * norm) {
    throw Error(ErrorCode::DegenerateGram, "gram is not symmetric");
  }
  gram_ = 0.5 * (gram_ + gram_.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram_, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().cwiseAbs().minCoeff();
  const double det = gram_.determinant();
  if (smallest <= kIdentityTol * norm ||
      std::abs(det) <= kIdentityTol * std::pow(norm, static_cast<double>(gram_.rows()))) {
    throw Error(ErrorCode::DegenerateGram, "gram has an eigenvalue of magnitude " +
                                               std::to_string(smallest));
  }
  gram_inv_ = gram_.inverse();
}

PseudoSpace PseudoSpace::euclidean(int dim) { return PseudoSpace(Mat::Identity(dim, dim)); }

PseudoSpace PseudoSpace::anti_diagonal(int dim, double eps) {
  Mat g = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) g(i, dim - 1 - i) = eps;
  return PseudoSpace(std::move(g));
}

Signature signature_of(const PseudoSpace& space) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(space.gram(), Eigen::EigenvaluesOnly);
  const double scale = space.gram().norm();
  Signature sig;
  for (double lambda : eig.eigenvalues()) {
    if (std::abs(lambda) <= kIdentityTol * scale) {
      throw Error(ErrorCode::DegenerateGram, "vanishing eigenvalue");
    }
    (lambda > 0 ? sig.p_plus : sig.p_minus) += 1;
  }
  sig.semi_neutral = std::abs(sig.p_plus - sig.p_minus) <= 1;
  sig.euclidean = sig.p_plus == 0 || sig.p_minus == 0;
  return sig;
}

int numeric_rank(const Mat& m, double rel) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel * s(0)) ++rank;
  }
  return rank;
}

Mat null_space(const Mat& m, double rel) {
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return Mat::Identity(cols, cols);
  // Pad to at least `cols` rows so the full right singular basis is available.
  Mat padded = Mat::Zero(std::max(m.rows(), cols), cols);
  padded.topRows(m.rows()) = m;
  Eigen::JacobiSVD<Mat> svd(padded, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double top = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (top > 0.0 && s(i) > rel * top) ++rank;
  }
  return svd.matrixV().rightCols(cols - rank);
}

SymOperator check_operator(const PseudoSpace& space, const Mat& a) {
  const int m = space.dim();
  if (a.rows() != m || a.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch,
                "operator must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  const double norm = a.norm();
  const Mat ga = space.gram() * a;
  const double scale = std::max(norm, 1e-300) * space.gram().norm();
  if ((ga - ga.transpose()).norm() > kIdentityTol * scale) {
    throw Error(ErrorCode::NotSelfAdjoint, "gram*A is not symmetric");
  }
  if (std::abs(a.trace()) > kIdentityTol * std::max(norm, 1.0)) {
    throw Error(ErrorCode::NotTraceless, "trace is " + std::to_string(a.trace()));
  }
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::ZeroOperator, "A vanishes");
  }
  return SymOperator(a, numeric_rank(a, kRankTol));
}

std::vector<Mat> skew_adjoint_basis(const PseudoSpace& space) {
  const int m = space.dim();
  std::vector<Mat> basis;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      Mat k = Mat::Zero(m, m);
      k(i, j) = 1.0;
      k(j, i) = -1.0;
      basis.push_back(space.gram_inverse() * k);
    }
  }
  return basis;
}

std::vector<Mat> centralizer_basis(const PseudoSpace& space, const Mat& a) {
  const int m = space.dim();
  const auto so = skew_adjoint_basis(space);
  std::vector<Mat> result;
  if (so.empty()) return result;
  // Column k holds vec([P_k, A]); the centralizer is its null space.
  Mat system(m * m, static_cast<Eigen::Index>(so.size()));
  for (std::size_t k = 0; k < so.size(); ++k) {
    const Mat c = so[k] * a - a * so[k];
    system.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vec>(c.data(), c.size());
  }
  const Mat kernel = null_space(system, kRankTol);
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    Mat p = Mat::Zero(m, m);
    for (std::size_t k = 0; k < so.size(); ++k) p += kernel(static_cast<Eigen::Index>(k), c) * so[k];
    result.push_back(std::move(p));
  }
  return result;
}

Genericity is_generic(const PseudoSpace& space, const SymOperator& a) {
  Genericity g;
  g.centralizer_dim = static_cast<int>(centralizer_basis(space, a.matrix()).size());
  g.generic = g.centralizer_dim == 0;
  return g;
}

}  // namespace ecs
