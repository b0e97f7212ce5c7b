#include "ecs/construct.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <Eigen/Eigenvalues>

#include "ecs/error.hpp"

namespace ecs {

namespace {

// ---------------------------------------------------------------- Z-spectral

struct Cycle {
  int j;       // 1-based pair index of the first member
  int jp;      // m + 1 - j
  bool middle; // j == jp
};

std::vector<Cycle> cycles_of(int m) {
  std::vector<Cycle> out;
  for (int j = 1; j <= m + 1 - j; ++j) out.push_back({j, m + 1 - j, j == m + 1 - j});
  return out;
}

// E and J on the cycle through (2j-1, 2j) for free value a and bit x.
void fill_cycle(const Cycle& c, int k, int a, int x, std::vector<int>& e, std::vector<int>& jv) {
  const int alpha = 2 * c.j - 2;  // 0-based index of 2j-1
  const int beta = 2 * c.j - 1;
  if (c.middle) {
    e[alpha] = (k - 1) / 2;
    e[beta] = -(k + 1) / 2;
    jv[alpha] = x;
    jv[beta] = 1 - x;
    return;
  }
  const int gamma = 2 * c.jp - 2;
  const int delta = 2 * c.jp - 1;
  e[alpha] = a;
  e[beta] = a - k;
  e[gamma] = k - 1 - a;
  e[delta] = -1 - a;
  jv[alpha] = x;
  jv[beta] = 1 - x;
  jv[gamma] = x;
  jv[delta] = 1 - x;
}

bool y_symmetric(const std::vector<int>& e, const std::vector<int>& jv) {
  std::set<int> y{-1};
  for (std::size_t i = 0; i < e.size(); ++i)
    if (jv[i] == 1) y.insert(e[i]);
  for (int v : y)
    if (!y.count(-v)) return false;
  return true;
}

// ---------------------------------------------------------------- polynomials

using RatPoly = std::vector<Rational>;  // ascending

void trim(RatPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

RatPoly derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long long>(i));
  if (d.empty()) d.push_back(0);
  return d;
}

RatPoly remainder(RatPoly a, const RatPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
    const Rational factor = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
    a.pop_back();
    if (a.empty()) a.push_back(0);
    trim(a);
  }
  return a;
}

bool is_zero(const RatPoly& p) { return p.size() == 1 && p[0] == 0; }

std::vector<RatPoly> sturm_chain(const RatPoly& p) {
  std::vector<RatPoly> chain{p, derivative(p)};
  trim(chain[1]);
  while (!is_zero(chain.back())) {
    RatPoly r = remainder(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    if (is_zero(r)) break;
    chain.push_back(std::move(r));
  }
  return chain;
}

Rational eval(const RatPoly& p, const Rational& x) {
  Rational acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

int sign_changes(const std::vector<Rational>& values) {
  int changes = 0;
  int last = 0;
  for (const auto& v : values) {
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int changes_at(const std::vector<RatPoly>& chain, const Rational& x) {
  std::vector<Rational> vals;
  for (const auto& p : chain) vals.push_back(eval(p, x));
  return sign_changes(vals);
}

int changes_at_infinity(const std::vector<RatPoly>& chain) {
  std::vector<Rational> vals;
  for (const auto& p : chain) vals.push_back(p.back());
  return sign_changes(vals);
}

long double eval_ld(const std::vector<long long>& c, long double x) {
  long double acc = 0.0L;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + static_cast<long double>(c[i]);
  return acc;
}

IntMatrix companion(const std::vector<long long>& c) {
  const auto m = static_cast<Eigen::Index>(c.size() - 1);
  IntMatrix t = IntMatrix::Zero(m, m);
  for (Eigen::Index i = 1; i < m; ++i) t(i, i - 1) = 1;
  for (Eigen::Index i = 0; i < m; ++i) t(i, m - 1) = -c[static_cast<std::size_t>(i)];
  return t;
}

// Returns the reason a coefficient vector is rejected, or an empty string.
std::string reject_reason(const std::vector<long long>& c, std::vector<double>* roots) {
  if (c.size() < 3) return "degree must be at least 2";
  if (c.back() != 1) return "polynomial must be monic";
  if (c.front() != 1 && c.front() != -1) return "constant term must be +-1";
  // All roots positive forces strictly alternating signs.
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const bool want_neg = ((c.size() - 1 - i) % 2) == 1;
    if (c[i] == 0 || (c[i] < 0) != want_neg) return "roots are not all real and positive";
  }
  RatPoly p;
  for (long long x : c) p.emplace_back(x);
  if (eval(p, 1) == 0) return "1 is a root";
  const auto chain = sturm_chain(p);
  if (chain.back().size() != 1) return "repeated roots";
  const int deg = static_cast<int>(c.size()) - 1;
  const int positive = changes_at(chain, 0) - changes_at_infinity(chain);
  if (positive != deg) return "roots are not all real, distinct and positive";
  // Isolate with exact Sturm counts, refine by bisection on the sign of p.
  long long bound = 1;
  for (long long x : c) bound = std::max(bound, std::llabs(x));
  std::vector<std::pair<Rational, Rational>> todo{{Rational(0), Rational(bound + 1)}};
  std::vector<std::pair<Rational, Rational>> isolated;
  while (!todo.empty()) {
    auto [a, b] = todo.back();
    todo.pop_back();
    const int n = changes_at(chain, a) - changes_at(chain, b);
    if (n == 0) continue;
    if (n == 1) {
      isolated.emplace_back(a, b);
      continue;
    }
    const Rational mid = (a + b) / 2;
    todo.emplace_back(a, mid);
    todo.emplace_back(mid, b);
  }
  std::vector<double> out;
  for (auto& [a, b] : isolated) {
    long double lo = a.convert_to<long double>();
    long double hi = b.convert_to<long double>();
    const bool lo_neg = eval_ld(c, lo) < 0;
    while (hi - lo > 1e-13L) {
      const long double mid = 0.5L * (lo + hi);
      const long double v = eval_ld(c, mid);
      if (v == 0.0L) {
        lo = hi = mid;
        break;
      }
      ((v < 0) == lo_neg ? lo : hi) = mid;
    }
    out.push_back(static_cast<double>(0.5L * (lo + hi)));
  }
  std::sort(out.begin(), out.end());
  if (deg == 2 && std::abs(out[0] * out[1] - 1.0) < 1e-12) return "eigenvalues of the form {l, 1/l}";
  if (roots != nullptr) *roots = std::move(out);
  return {};
}

// ---------------------------------------------------------------- Floquet

Mat hill_monodromy(const Profile& phi, double delta, double period) {
  SecondOrderSystem sys;
  sys.m = 1;
  sys.potential = [&phi, delta](double t) { return Mat::Constant(1, 1, phi.value(t) + delta); };
  return propagate(sys, Mat::Identity(2, 2), 0.0, period);
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

std::vector<int> ZSpectralSystem::selector() const {
  std::vector<int> s;
  for (std::size_t i = 0; i < j.size(); ++i)
    if (j[i] == 1) s.push_back(static_cast<int>(i) + 1);
  return s;
}

std::vector<int> ZSpectralSystem::y_set() const {
  std::vector<int> y{-1};
  for (int i : selector()) y.push_back(e[static_cast<std::size_t>(i - 1)]);
  std::sort(y.begin(), y.end());
  return y;
}

CheckReport verify_zspectral(const ZSpectralSystem& sys) {
  CheckReport r;
  const int m = sys.m;
  const auto n2 = static_cast<std::size_t>(2 * m);
  const bool sized = m >= 1 && sys.e.size() == n2 && sys.j.size() == n2;
  r.add({"zs_sizes", sized, sized ? 0.0 : 1.0, 0.0, "E and J defined on 1..2m"});
  if (!sized) return r;
  const auto E = [&](int i) { return sys.e[static_cast<std::size_t>(i - 1)]; };
  const auto J = [&](int i) { return sys.j[static_cast<std::size_t>(i - 1)]; };
  int bad = 0;

  bad = (sys.k + 1 == 2 * E(1)) ? 0 : 1;
  r.add({"zs_i", bad == 0, static_cast<double>(bad), 0.0, "k + 1 = 2 E(1)"});

  bad = 0;
  for (int i = 1; i <= 2 * m; ++i) {
    const int ip = 2 * m + 1 - i;
    if (E(i) + E(ip) != -1 || J(i) + J(ip) != 1) ++bad;
  }
  r.add({"zs_ii", bad == 0, static_cast<double>(bad), 0.0, "E(i) + E(i') = -1, J(i) + J(i') = 1 for i + i' = 2m + 1"});

  bad = 0;
  for (int i = 1; i < 2 * m; i += 2) {
    if (E(i) - E(i + 1) != sys.k || J(i) + J(i + 1) != 1) ++bad;
  }
  r.add({"zs_iii", bad == 0, static_cast<double>(bad), 0.0, "E(i) - E(i + 1) = k, J(i) + J(i + 1) = 1 for even i + 1"});

  std::set<int> y{-1};
  for (int i = 1; i <= 2 * m; ++i)
    if (J(i) == 1) y.insert(E(i));
  bad = 0;
  for (int v : y)
    if (!y.count(-v)) ++bad;
  r.add({"zs_iv", bad == 0, static_cast<double>(bad), 0.0, "Y symmetric about 0"});

  std::set<int> values(sys.e.begin(), sys.e.end());
  bad = static_cast<int>(n2 - values.size());
  r.add({"zs_injective", bad == 0, static_cast<double>(bad), 0.0, "E injective"});
  bad = static_cast<int>(values.count(-1));
  r.add({"zs_not_minus_one", bad == 0, static_cast<double>(bad), 0.0, "E never takes -1"});

  bad = 0;
  for (int v : sys.j)
    if (v != 0 && v != 1) ++bad;
  for (int i = 1; i <= m; ++i) {
    if (J(i) + J(2 * m + 1 - i) != 1) ++bad;  // one of {i, 2m+1-i}
    if (J(2 * i - 1) + J(2 * i) != 1) ++bad;  // one of {2i-1, 2i}
  }
  r.add({"zs_selector", bad == 0, static_cast<double>(bad), 0.0, "S_1 selects one index from every pair of both families"});
  return r;
}

ZSpectralSystem search_zspectral(int m, int k, int box) {
  if (m < 2 || k < 2) throw Error(ErrorCode::NoSystemFound, "need m >= 2 and k >= 2");
  if (k % 2 == 0) throw Error(ErrorCode::NoSystemFound, "k + 1 = 2 E(1) forces k odd");
  if (box <= 0) box = 2 * (k + m);
  const auto cycles = cycles_of(m);
  std::vector<std::size_t> free_cycles;
  for (std::size_t c = 1; c < cycles.size(); ++c)
    if (!cycles[c].middle) free_cycles.push_back(c);

  std::vector<int> e(static_cast<std::size_t>(2 * m), 0);
  std::vector<int> jv(static_cast<std::size_t>(2 * m), 0);
  std::vector<int> a(cycles.size(), 0);
  a[0] = (k + 1) / 2;
  const int nbits = static_cast<int>(cycles.size());
  std::optional<ZSpectralSystem> found;

  const auto injective_so_far = [&](std::size_t upto) {
    std::set<int> seen;
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      const bool assigned = c == 0 || cycles[c].middle ||
                            std::find(free_cycles.begin(), free_cycles.begin() + static_cast<long>(upto), c) !=
                                free_cycles.begin() + static_cast<long>(upto);
      if (!assigned) continue;
      fill_cycle(cycles[c], k, a[c], 0, e, jv);
      const int idx[] = {2 * cycles[c].j - 2, 2 * cycles[c].j - 1, 2 * cycles[c].jp - 2, 2 * cycles[c].jp - 1};
      const int cnt = cycles[c].middle ? 2 : 4;
      for (int t = 0; t < cnt; ++t) {
        const int v = e[static_cast<std::size_t>(idx[t])];
        if (v == -1 || !seen.insert(v).second) return false;
      }
    }
    return true;
  };

  std::function<void(std::size_t)> recurse = [&](std::size_t level) {
    if (found) return;
    if (!injective_so_far(level)) return;
    if (level == free_cycles.size()) {
      for (long bits = 0; bits < (1L << nbits) && !found; ++bits) {
        for (int c = 0; c < nbits; ++c) {
          const int x = static_cast<int>((bits >> (nbits - 1 - c)) & 1);
          fill_cycle(cycles[static_cast<std::size_t>(c)], k, a[static_cast<std::size_t>(c)], x, e, jv);
        }
        if (y_symmetric(e, jv)) found = ZSpectralSystem{m, k, e, jv};
      }
      return;
    }
    for (int v = -box; v <= box && !found; ++v) {
      a[free_cycles[level]] = v;
      recurse(level + 1);
    }
  };
  recurse(0);
  if (!found) throw Error(ErrorCode::NoSystemFound, "no system in the search box");
  if (!verify_zspectral(*found).all_passed()) {
    throw Error(ErrorCode::NoSystemFound, "search result failed independent verification");
  }
  return *found;
}

IntegerThetaMatrix validate_charpoly(const std::vector<long long>& ascending) {
  std::vector<double> roots;
  const std::string why = reject_reason(ascending, &roots);
  if (!why.empty()) throw Error(ErrorCode::BadPolynomial, why);
  return {ascending, companion(ascending), roots};
}

IntegerThetaMatrix search_integer_theta(int m, int box) {
  if (m < 3) throw Error(ErrorCode::SearchExhausted, "need m >= 3 for distinct eigenvalues beyond {l, 1/l}");
  std::vector<long long> c(static_cast<std::size_t>(m + 1), 0);
  c[static_cast<std::size_t>(m)] = 1;
  std::vector<double> roots;
  std::function<bool(int)> loop = [&](int idx) {
    if (idx == m) return reject_reason(c, &roots).empty();
    for (long long v = -box; v <= box; ++v) {
      c[static_cast<std::size_t>(idx)] = v;
      if (loop(idx + 1)) return true;
    }
    return false;
  };
  for (long long c0 : {-1LL, 1LL}) {
    c[0] = c0;
    if (loop(1)) return {c, companion(c), roots};
  }
  throw Error(ErrorCode::SearchExhausted, "no polynomial in the coefficient box; enlarge it");
}

FloquetData floquet_exponent(const Profile& phi, double delta, double period) {
  if (!(period > 0.0)) throw Error(ErrorCode::InvalidProfile, "period must be positive");
  if (auto per = phi.period()) {
    const double ratio = period / *per;
    if (std::abs(ratio - std::round(ratio)) > 1e-12 || std::round(ratio) < 1) {
      throw Error(ErrorCode::InvalidProfile, "profile is not periodic with this period");
    }
  } else {
    throw Error(ErrorCode::InvalidProfile, "profile is not periodic");
  }
  FloquetData out;
  out.monodromy = hill_monodromy(phi, delta, period);
  const Mat& mono = out.monodromy;
  const double half = 0.5 * mono.trace();
  const double det = mono.determinant();
  const double disc = half * half - det;
  if (disc < 0.0) {
    throw Error(ErrorCode::ComplexMultipliers, "delta = " + std::to_string(delta) + " lies in a stability band");
  }
  const double root = std::sqrt(disc);
  const double big = half >= 0 ? half + root : half - root;
  const double small = det / big;
  out.multipliers = {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
  if (big > 0.0 && small > 0.0 && big != small) {
    out.log_integrals = std::array<double, 2>{std::log(big), std::log(small)};
  }
  return out;
}

DilationalWitness build_dilational(int n, int trace) {
  if (n < 5 || n % 2 == 0) {
    throw Error(ErrorCode::InvalidSpec, "dilational examples exist in all odd dimensions n >= 5; got n = " + std::to_string(n));
  }
  if (trace < 3) throw Error(ErrorCode::InvalidSpec, "trace must be an integer >= 3 so that q > 1");
  const int m = n - 2;
  DilationalWitness w;
  w.system = search_zspectral(m, n);
  const auto& sys = w.system;
  const double t = static_cast<double>(trace);
  const double q = 0.5 * (t + std::sqrt(t * t - 4.0));
  w.q = q;

  Mat a = Mat::Zero(m, m);
  a(0, m - 1) = 1.0;  // A e_m = e_1
  Mat c = Mat::Zero(m, m);
  for (int i = 1; i <= m; ++i) {
    const int ai = sys.e[static_cast<std::size_t>(2 * i - 2)] + (1 - n) / 2;
    c(i - 1, i - 1) = std::pow(q, ai);
  }
  const double coeff = (static_cast<double>(n) * n - 1.0) / 4.0;
  const PlaneWaveSpec spec =
      PlaneWaveSpec::make(PseudoSpace::anti_diagonal(m, 1.0), a, Interval::positive(), Profile::inverse_square(coeff));
  const SigmaElement sigma = validate_sigma(spec, q, 0.0, c);

  const double t0 = spec.interval().base_time();
  const Mat s = sigma_matrix_on_E(spec, sigma, t0);
  Eigen::EigenSolver<Mat> es(s, false);
  const auto ev = es.eigenvalues();
  std::vector<bool> used(static_cast<std::size_t>(2 * m), false);
  Mat basis(2 * m, 2 * m);
  for (int i = 0; i < 2 * m; ++i) {
    const double target = std::pow(q, sys.e[static_cast<std::size_t>(i)]);
    int best = -1;
    double best_err = std::numeric_limits<double>::infinity();
    for (int l = 0; l < 2 * m; ++l) {
      const double err = std::abs(ev(l) - target) / target;
      if (err < best_err) {
        best_err = err;
        best = l;
      }
    }
    if (best < 0 || best_err > 1e-6 || used[static_cast<std::size_t>(best)]) {
      throw Error(ErrorCode::EigenOrderingAmbiguous, "cannot match eigenvalue q^" + std::to_string(sys.e[static_cast<std::size_t>(i)]));
    }
    used[static_cast<std::size_t>(best)] = true;
    const double lambda = ev(best).real();
    w.sigma_spectrum.push_back(lambda);
    Eigen::JacobiSVD<Mat> svd(s - lambda * Mat::Identity(2 * m, 2 * m), Eigen::ComputeFullV);
    basis.col(i) = svd.matrixV().col(2 * m - 1).normalized();
  }
  const Mat jm = omega_matrix(spec.space());
  for (int i = 0; i < 2 * m; ++i)
    for (int l = 0; l < 2 * m; ++l) {
      if (i + l + 2 == 2 * m + 1) continue;
      w.pairing_residual = std::max(w.pairing_residual, std::abs(basis.col(i).dot(jm * basis.col(l))));
    }

  const auto sel = sys.selector();
  Mat lbasis(2 * m, m);
  for (int idx = 0; idx < m; ++idx) lbasis.col(idx) = basis.col(sel[static_cast<std::size_t>(idx)] - 1);

  // Coordinate 0 carries q^-1, coordinate 1 + idx carries q^{E(sel[idx])}.
  std::vector<int> expo{-1};
  for (int i : sel) expo.push_back(sys.e[static_cast<std::size_t>(i - 1)]);
  Mat lattice = Mat::Zero(m + 1, m + 1);
  int col = 0;
  std::vector<int> ys = sys.y_set();
  for (int av : ys) {
    if (av <= 0) continue;
    const auto pos = std::find(expo.begin(), expo.end(), av) - expo.begin();
    const auto neg = std::find(expo.begin(), expo.end(), -av) - expo.begin();
    if (pos == static_cast<long>(expo.size()) || neg == static_cast<long>(expo.size())) {
      throw Error(ErrorCode::CyclicVectorFailure, "Y is not symmetric");
    }
    // Companion pair (v, K v) for the block with eigenvalues q^a, q^-a.
    lattice(pos, col) = 1.0;
    lattice(neg, col) = 1.0;
    lattice(pos, col + 1) = std::pow(q, av);
    lattice(neg, col + 1) = std::pow(q, -av);
    col += 2;
  }
  if (col != m + 1) throw Error(ErrorCode::CyclicVectorFailure, "lattice basis is incomplete");

  w.cert.emplace(QuotientCertificate{spec, Isometry::make(spec, sigma, 0.0, SolutionVector::zero(m, t0)),
                                     Subspace(t0, lbasis), LatticeData{lattice, 0.0}, {}, {}});
  auto& cert = *w.cert;
  cert.checks = verify_certificate(cert, &w.audit);
  if (!cert.checks.all_passed()) {
    throw Error(ErrorCode::CertificateFailed, "dilational certificate does not verify");
  }
  cert.classification = classify_quotient(cert);
  return w;
}

TranslationalWitness build_translational(int n, const IntegerThetaMatrix& theta_matrix,
                                         const TranslationalOptions& options) {
  if (n < 5) throw Error(ErrorCode::InvalidSpec, "translational construction needs n >= 5");
  const int m = n - 2;
  if (static_cast<int>(theta_matrix.eigenvalues.size()) != m) {
    throw Error(ErrorCode::DimensionMismatch, "theta matrix must be (n-2) x (n-2)");
  }
  if (!(options.period > 0.0)) throw Error(ErrorCode::InvalidSpec, "period must be positive");
  if (!(options.theta > 0.0)) throw Error(ErrorCode::InvalidSpec, "theta must be positive");
  if (options.grid_intervals < 16) throw Error(ErrorCode::InvalidSpec, "grid too coarse");
  const double p = options.period;

  const FourierSeries b1 = FourierSeries::cosine(p, options.seed_amplitude);
  const FourierSeries phi = b1.derivative() + b1 * b1;
  const Profile phi_profile = Profile::fourier(phi);
  {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < 64; ++i) {
      const double v = phi.value(p * i / 64.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!(hi - lo > 1e-8 * (1.0 + std::abs(phi.mean())))) {
      throw Error(ErrorCode::ConstantTrace, "seed gives a constant trace part; reseed");
    }
  }

  // Per entry: delta_i > 0 with Floquet exponent |log lambda_i|.
  std::vector<double> deltas;
  std::vector<double> slopes;
  for (double lambda : theta_matrix.eigenvalues) {
    const double target = -std::log(lambda);  // wanted integral of b_i
    const double want = std::cosh(target);
    const auto g = [&](double d) { return 0.5 * hill_monodromy(phi_profile, d, p).trace() - want; };
    double lo = 0.0;
    if (!(g(lo) < 0.0)) throw Error(ErrorCode::FloquetGap, "band edge is not at delta = 0");
    double hi = std::max(1.0, (target / p) * (target / p));
    int expand = 0;
    while (!(g(hi) > 0.0)) {
      lo = hi;
      hi *= 2.0;
      if (++expand > 60) throw Error(ErrorCode::FloquetGap, "cannot bracket delta");
    }
    boost::uintmax_t iters = 200;
    const auto res = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    const double delta = 0.5 * (res.first + res.second);
    const FloquetData fd = floquet_exponent(phi_profile, delta, p);
    if (!fd.log_integrals) throw Error(ErrorCode::FloquetGap, "multipliers are not real and positive");
    const double mu = std::exp(target);
    const Mat& mono = fd.monodromy;
    // Initial slope of the Floquet solution with multiplier mu and y(0) = 1.
    const double s1 = std::abs(mono(0, 1)) > 1e-300 ? (mu - mono(0, 0)) / mono(0, 1) : 0.0;
    const double s2 = std::abs(mu - mono(1, 1)) > 1e-300 ? mono(1, 0) / (mu - mono(1, 1)) : 0.0;
    const double slope = std::abs(mono(0, 1)) >= std::abs(mu - mono(1, 1)) ? s1 : s2;
    deltas.push_back(delta);
    slopes.push_back(slope);
  }

  // b_i = y_i'/y_i sampled on one period.
  const int nodes = options.grid_intervals;
  std::vector<double> grid;
  for (int i = 0; i <= nodes; ++i) grid.push_back(p * i / nodes);
  std::vector<std::vector<double>> bvals(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    SecondOrderSystem sys;
    sys.m = 1;
    const double d = deltas[static_cast<std::size_t>(i)];
    sys.potential = [&phi, d](double t) { return Mat::Constant(1, 1, phi.value(t) + d); };
    Mat y0(2, 1);
    y0 << 1.0, slopes[static_cast<std::size_t>(i)];
    const auto states = propagate_through(sys, y0, 0.0, grid);
    auto& bv = bvals[static_cast<std::size_t>(i)];
    for (const Mat& y : states) {
      if (!(y(0, 0) > 0.0)) throw Error(ErrorCode::FloquetGap, "Floquet solution changes sign");
      bv.push_back(y(1, 0) / y(0, 0));
    }
    bv.back() = bv.front();  // exact periodicity of the stored samples
  }

  const double mean_delta = mean_of(deltas);
  const FourierSeries f = phi.plus_constant(mean_delta);
  Mat a = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) a(i, i) = deltas[static_cast<std::size_t>(i)] - mean_delta;
  const PlaneWaveSpec spec = PlaneWaveSpec::make(PseudoSpace::euclidean(m), a, Interval::real(), Profile::fourier(f));

  SampledCurve curve;
  curve.period = p;
  curve.nodes = grid;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Vec bk(m);
    Vec dk(m);
    for (int i = 0; i < m; ++i) {
      const double b = bvals[static_cast<std::size_t>(i)][k];
      bk(i) = b;
      dk(i) = phi.value(grid[k]) + deltas[static_cast<std::size_t>(i)] - b * b;
    }
    curve.values.emplace_back(bk.asDiagonal());
    curve.derivatives.emplace_back(dk.asDiagonal());
  }
  RiccatiCurve bcurve(std::move(curve));

  const SigmaElement sigma = validate_sigma(spec, 1.0, p, Mat::Identity(m, m));
  const Subspace l = riccati_basis(spec, bcurve, 0.0);

  // Sigma = Z theta x Lambda, Lambda spanned by (lambda_i^j)_i, j = 0..m-1.
  Mat lattice = Mat::Zero(m + 1, m + 1);
  lattice(0, 0) = options.theta;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) lattice(1 + i, 1 + j) = std::pow(theta_matrix.eigenvalues[static_cast<std::size_t>(i)], j);

  TranslationalWitness w{QuotientCertificate{spec, Isometry::make(spec, sigma, 0.0, SolutionVector::zero(m, 0.0)), l,
                                             LatticeData{lattice, options.theta}, {}, {}},
                         theta_matrix, deltas, phi, bcurve, {}};
  w.cert.checks = verify_certificate(w.cert, &w.audit);
  if (!w.cert.checks.all_passed()) {
    throw Error(ErrorCode::CertificateFailed, "translational certificate does not verify");
  }
  w.cert.classification = classify_quotient(w.cert);
  return w;
}

}  // namespace ecs
