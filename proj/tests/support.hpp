#pragma once

#include <functional>
#include <random>

#include "ecs/cli.hpp"
#include "ecs/construct.hpp"

namespace ecs::testing {

/// n = 5 witnesses, built once per process.
const DilationalWitness& dilational5();
const TranslationalWitness& translational5();

std::mt19937_64& rng();
double uniform(double lo, double hi);
Vec random_vec(int n, double lo = -1.0, double hi = 1.0);
/// Random point of the spec with t in [t_lo, t_hi].
Point random_point_in(const PlaneWaveSpec& spec, double t_lo, double t_hi);

Vec coords(const Point& p);
Point point_of(const Vec& x);

/// Central-difference Jacobian of a map R^k -> R^l.
Mat numeric_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h);

/// max |(L_X g)_ab| from central differences of metric_at and killing_value.
double lie_derivative_residual(const PlaneWaveSpec& spec, const KillingTriple& x, const Point& p, double h);

/// [X, Y]^a = X^b d_b Y^a - Y^b d_b X^a from central differences.
Vec numeric_commutator(const PlaneWaveSpec& spec, const KillingTriple& x, const KillingTriple& y,
                       const Point& p, double h);

/// Basis size of {P : gram P + P^T gram = 0, P A = A P}, solved over all
/// m x m matrices at once with a Kronecker-product null space.
int brute_force_centralizer_dim(const Mat& gram, const Mat& a);

/// One numeric leaf of a report, moved by a fixed amount and re-verified.
struct Corruption {
  std::string path;                  // e.g. certificate.gamma.C[0][0]
  bool rejected = false;             // verify failed (or refused the document)
  std::vector<std::string> failing;  // failing check names, or "malformed"
};

/// Perturbs every numeric leaf outside checks/classification/version by
/// delta, one at a time, and runs the verify pipeline on each copy.
std::vector<Corruption> corruption_sweep(const Json& report, double delta);

/// Leaves whose perturbation leaves a valid certificate; each comes with the
/// reason. Empty string when the path is not exempt.
std::string exemption_reason(const std::string& path, SigmaKind kind);

/// Checks a corruption of `path` is expected to trip (any one suffices).
std::vector<std::string> expected_checks(const std::string& path);

}  // namespace ecs::testing
