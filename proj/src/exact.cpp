#include "ecs/exact.hpp"

#include <cmath>

#include <boost/integer/common_factor.hpp>

#include "ecs/error.hpp"

namespace ecs {

IntMatrix round_matrix(const Mat& m, double* worst_distance) {
  IntMatrix out(m.rows(), m.cols());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double r = std::round(m(i, j));
      worst = std::max(worst, std::abs(m(i, j) - r));
      out(i, j) = static_cast<long long>(r);
    }
  }
  if (worst_distance != nullptr) *worst_distance = worst;
  return out;
}

BigInt bareiss_determinant(const IntMatrix& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "determinant needs a square matrix");
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::vector<BigInt> characteristic_polynomial(const IntMatrix& m) {
  // Faddeev-LeVerrier over Q; every c_k comes out integral.
  const auto n = static_cast<std::size_t>(m.rows());
  const RatMatrix a = to_rational(m);
  RatMatrix mk(n, std::vector<Rational>(n, 0));
  std::vector<Rational> c(n + 1, 0);
  c[n] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I, with M_0 = 0
    RatMatrix next(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (std::size_t l = 0; l < n; ++l) s += a[i][l] * mk[l][j];
        next[i][j] = s;
      }
      next[i][i] += c[n - k + 1];
    }
    mk = std::move(next);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * mk[l][i];
    c[n - k] = -tr / static_cast<long long>(k);
  }
  std::vector<BigInt> out;
  for (const Rational& x : c) {
    if (boost::multiprecision::denominator(x) != 1) {
      throw Error(ErrorCode::BadPolynomial, "non-integral characteristic coefficient");
    }
    out.push_back(boost::multiprecision::numerator(x));
  }
  return out;
}

std::vector<BigInt> poly_multiply(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<BigInt> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix out(static_cast<std::size_t>(m.rows()), std::vector<Rational>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rational(m(i, j));
  return out;
}

std::vector<std::vector<Rational>> rational_kernel(const RatMatrix& m) {
  if (m.empty()) return {};
  RatMatrix a = m;
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    const Rational lead = a[r][c];
    for (auto& x : a[r]) x /= lead;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational factor = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= factor * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<std::vector<Rational>> basis;
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

Rational rationalize(double x, long long max_den) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidSpec, "cannot rationalize a non-finite value");
  // Continued-fraction convergents h/k.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rem);
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const double frac = rem - a;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= 1e-15 * (1.0 + std::abs(x)) ||
        frac < 1e-15) {
      break;
    }
    rem = 1.0 / frac;
  }
  return Rational(h1, k1);
}

std::vector<BigInt> primitive_integer_vector(const std::vector<Rational>& v) {
  BigInt lcm = 1;
  for (const auto& x : v) lcm = boost::integer::lcm(lcm, BigInt(boost::multiprecision::denominator(x)));
  std::vector<BigInt> out;
  BigInt g = 0;
  for (const auto& x : v) {
    const Rational scaled = x * lcm;
    out.push_back(boost::multiprecision::numerator(scaled));
    g = boost::integer::gcd(g, out.back());
  }
  if (g > 1) {
    for (auto& x : out) x /= g;
  }
  return out;
}

}  // namespace ecs
