#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ecs {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Real vector space with a nondegenerate symmetric bilinear form of
/// arbitrary signature, written in a caller-chosen basis.
class PseudoSpace {
 public:
  /// Throws Error(DegenerateGram) unless gram is symmetric and nondegenerate.
  explicit PseudoSpace(Mat gram);

  static PseudoSpace euclidean(int dim);
  /// Gram matrix with <e_i, e_{m+1-i}> = eps and all other pairings zero.
  static PseudoSpace anti_diagonal(int dim, double eps = 1.0);

  int dim() const { return static_cast<int>(gram_.rows()); }
  const Mat& gram() const { return gram_; }
  const Mat& gram_inverse() const { return gram_inv_; }

  double inner(const Vec& x, const Vec& y) const { return x.dot(gram_ * y); }

  /// Adjoint of M with respect to the form: gram^{-1} M^T gram.
  Mat adjoint(const Mat& m) const { return gram_inv_ * m.transpose() * gram_; }

  bool operator==(const PseudoSpace& other) const { return gram_ == other.gram_; }

 private:
  Mat gram_;
  Mat gram_inv_;
};

struct Signature {
  int p_plus = 0;
  int p_minus = 0;
  bool semi_neutral = false;  // |p_plus - p_minus| <= 1
  bool euclidean = false;     // definite
};

Signature signature_of(const PseudoSpace& space);

/// A nonzero, traceless, self-adjoint operator. Only check_operator builds one.
class SymOperator {
 public:
  const Mat& matrix() const { return matrix_; }
  int rank() const { return rank_; }

 private:
  friend SymOperator check_operator(const PseudoSpace&, const Mat&);
  SymOperator(Mat m, int rank) : matrix_(std::move(m)), rank_(rank) {}
  Mat matrix_;
  int rank_ = 0;
};

/// Validates A against the space. Throws NotSelfAdjoint, NotTraceless or
/// ZeroOperator (checked in that order) and DimensionMismatch on shape errors.
SymOperator check_operator(const PseudoSpace& space, const Mat& a);

/// Numerical rank: singular values above rel * largest.
int numeric_rank(const Mat& m, double rel = 1e-10);

/// Orthonormal basis (columns) of the null space of m, decided with a
/// relative singular-value threshold.
Mat null_space(const Mat& m, double rel = 1e-10);

/// Basis of so(V) = {P : gram P + P^T gram = 0}.
std::vector<Mat> skew_adjoint_basis(const PseudoSpace& space);

/// Basis of {P in so(V) : [P, A] = 0}, the Lie algebra of the isometries
/// commuting with A.
std::vector<Mat> centralizer_basis(const PseudoSpace& space, const Mat& a);

struct Genericity {
  bool generic = false;
  int centralizer_dim = 0;
};

/// A is generic iff only finitely many isometries commute with it, decided
/// by the vanishing of the centralizer algebra.
Genericity is_generic(const PseudoSpace& space, const SymOperator& a);

}  // namespace ecs
