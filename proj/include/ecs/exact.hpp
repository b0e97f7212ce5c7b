#pragma once

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ecs/pseudo.hpp"

namespace ecs {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using RatMatrix = std::vector<std::vector<Rational>>;

/// Nearest-integer rounding; returns the largest entrywise distance moved.
IntMatrix round_matrix(const Mat& m, double* worst_distance);

/// Determinant by fraction-free elimination.
BigInt bareiss_determinant(const IntMatrix& m);

/// Coefficients c_0..c_n of det(x I - M), c_n = 1.
std::vector<BigInt> characteristic_polynomial(const IntMatrix& m);

/// Product of two polynomials given by ascending coefficients.
std::vector<BigInt> poly_multiply(const std::vector<BigInt>& a, const std::vector<BigInt>& b);

RatMatrix to_rational(const IntMatrix& m);

/// Basis of the right kernel of m over Q (reduced row echelon form).
std::vector<std::vector<Rational>> rational_kernel(const RatMatrix& m);

/// Best rational approximation with denominator at most max_den.
Rational rationalize(double x, long long max_den = 1000000);

/// Scales a rational vector to the primitive integer vector on its ray.
std::vector<BigInt> primitive_integer_vector(const std::vector<Rational>& v);

}  // namespace ecs
