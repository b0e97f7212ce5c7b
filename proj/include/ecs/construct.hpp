#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "ecs/quotient.hpp"

namespace ecs {

/// Combinatorial data (m, k, E, J); E and J are stored 0-based, so E[i]
/// holds E(i + 1).
struct ZSpectralSystem {
  int m = 0;
  int k = 0;
  std::vector<int> e;
  std::vector<int> j;

  /// S_1 = J^{-1}(1), 1-based.
  std::vector<int> selector() const;
  /// Y = {-1} together with E(i) for i in S_1, sorted.
  std::vector<int> y_set() const;
};

/// Independent re-check of (i)-(iv), injectivity, E != -1 and the selector
/// property for both pair families. Every condition is a named entry.
CheckReport verify_zspectral(const ZSpectralSystem& sys);

/// First system in the search order: free values ascending, J bits 0
/// before 1. Throws NoSystemFound (always for even k).
ZSpectralSystem search_zspectral(int m, int k, int box = 0);

/// Monic integer polynomial with constant term +-1 and m real, distinct,
/// positive roots other than 1, with its companion matrix.
struct IntegerThetaMatrix {
  std::vector<long long> charpoly;  // c_0 .. c_{m-1}, 1 (ascending)
  IntMatrix t;                      // companion matrix
  std::vector<double> eigenvalues;  // ascending, bisected to 1e-10
};

/// Throws BadPolynomial unless the coefficients define a valid matrix.
IntegerThetaMatrix validate_charpoly(const std::vector<long long>& ascending);

/// Searches c_0 in {-1, 1}, then c_1..c_{m-1} ascending in [-box, box].
/// Throws SearchExhausted.
IntegerThetaMatrix search_integer_theta(int m, int box = 10);

struct FloquetData {
  std::array<std::complex<double>, 2> multipliers;  // |mu_0| >= |mu_1|
  Mat monodromy;                                    // 2 x 2
  /// Integral of y'/y over one period for the two Floquet solutions
  /// (present when the multipliers are real, positive and distinct).
  std::optional<std::array<double, 2>> log_integrals;
};

/// Monodromy of x'' = (phi(t) + delta) x over [0, period]. Throws
/// ComplexMultipliers when delta lies in a stability band.
FloquetData floquet_exponent(const Profile& phi, double delta, double period);

struct DilationalWitness {
  std::optional<QuotientCertificate> cert;  // always set on return
  ZSpectralSystem system;
  double q = 0.0;
  std::vector<double> sigma_spectrum;  // eigenvalue matched to q^{E(i)}, i = 1..2m
  double pairing_residual = 0.0;       // max |Omega(u_i, u_j)|, i + j != 2m + 1
  LatticeAudit audit;
};

/// Throws InvalidSpec for even or small n and trace < 3, and
/// CertificateFailed if the assembled certificate does not verify.
DilationalWitness build_dilational(int n, int trace);

struct TranslationalOptions {
  double seed_amplitude = 0.3;
  double period = 1.0;
  double theta = 1.0;
  int grid_intervals = 1024;
};

struct TranslationalWitness {
  QuotientCertificate cert;
  IntegerThetaMatrix theta_matrix;
  std::vector<double> deltas;
  FourierSeries phi;
  RiccatiCurve b;
  LatticeAudit audit;
};

/// Diagonal Riccati construction with Floquet shooting per entry. Throws
/// FloquetGap, ConstantTrace or CertificateFailed.
TranslationalWitness build_translational(int n, const IntegerThetaMatrix& theta_matrix,
                                         const TranslationalOptions& options = {});

}  // namespace ecs
