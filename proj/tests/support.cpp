#include "support.hpp"
#include "ecs/error.hpp"

namespace ecs::testing {

const DilationalWitness& dilational5() {
  static const DilationalWitness w = build_dilational(5, 3);
  return w;
}

const TranslationalWitness& translational5() {
  static const TranslationalWitness w = build_translational(5, validate_charpoly({-1, 5, -6, 1}));
  return w;
}

std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240601);
  return gen;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

Vec random_vec(int n, double lo, double hi) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
  return v;
}

Point random_point_in(const PlaneWaveSpec& spec, double t_lo, double t_hi) {
  return {uniform(t_lo, t_hi), uniform(-1.0, 1.0), random_vec(spec.m())};
}

Vec coords(const Point& p) {
  Vec x(p.v.size() + 2);
  x << p.t, p.s, p.v;
  return x;
}

Point point_of(const Vec& x) { return {x(0), x(1), x.tail(x.size() - 2)}; }

Mat numeric_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
  const Vec f0 = f(x);
  Mat j(f0.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x;
    Vec xm = x;
    xp(k) += h;
    xm(k) -= h;
    j.col(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return j;
}

double lie_derivative_residual(const PlaneWaveSpec& spec, const KillingTriple& x, const Point& p, double h) {
  const Vec c = coords(p);
  const int n = static_cast<int>(c.size());
  const Mat g = metric_at(spec, p);
  const Vec xv = killing_value(spec, x, p);
  const Mat dx = numeric_jacobian([&](const Vec& y) { return killing_value(spec, x, point_of(y)); }, c, h);
  Mat lie = g * dx;
  lie = lie + lie.transpose().eval();
  for (int k = 0; k < n; ++k) {
    Vec cp = c;
    Vec cm = c;
    cp(k) += h;
    cm(k) -= h;
    lie += xv(k) * (metric_at(spec, point_of(cp)) - metric_at(spec, point_of(cm))) / (2.0 * h);
  }
  return lie.cwiseAbs().maxCoeff();
}

Vec numeric_commutator(const PlaneWaveSpec& spec, const KillingTriple& x, const KillingTriple& y,
                       const Point& p, double h) {
  const Vec c = coords(p);
  const Mat dx = numeric_jacobian([&](const Vec& z) { return killing_value(spec, x, point_of(z)); }, c, h);
  const Mat dy = numeric_jacobian([&](const Vec& z) { return killing_value(spec, y, point_of(z)); }, c, h);
  return dy * killing_value(spec, x, p) - dx * killing_value(spec, y, p);
}

int brute_force_centralizer_dim(const Mat& gram, const Mat& a) {
  const auto m = gram.rows();
  // vec(P) column-major; rows: gram P + P^T gram and P A - A P.
  Mat sys = Mat::Zero(2 * m * m, m * m);
  for (Eigen::Index col = 0; col < m * m; ++col) {
    Mat p = Mat::Zero(m, m);
    p(col % m, col / m) = 1.0;
    const Mat s1 = gram * p + p.transpose() * gram;
    const Mat s2 = p * a - a * p;
    sys.block(0, col, m * m, 1) = Eigen::Map<const Vec>(s1.data(), m * m);
    sys.block(m * m, col, m * m, 1) = Eigen::Map<const Vec>(s2.data(), m * m);
  }
  Eigen::FullPivLU<Mat> lu(sys);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.dimensionOfKernel());
}

}  // namespace ecs::testing

namespace ecs::testing {

namespace {

void collect_leaves(const Json& j, const std::string& path, std::vector<std::string>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (path.empty() && (it.key() == "checks" || it.key() == "classification" || it.key() == "version")) continue;
      collect_leaves(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) collect_leaves(j[i], path + "[" + std::to_string(i) + "]", out);
  } else if (j.is_number()) {
    out.push_back(path);
  }
}

Json::json_pointer pointer_of(const std::string& path) {
  std::string p = "/";
  for (char ch : path) {
    if (ch == '.' || ch == '[') {
      p += '/';
    } else if (ch != ']') {
      p += ch;
    }
  }
  return Json::json_pointer(p);
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

std::vector<Corruption> corruption_sweep(const Json& report, double delta) {
  std::vector<std::string> paths;
  collect_leaves(report, "", paths);
  std::vector<Corruption> out;
  for (const auto& path : paths) {
    Json copy = report;
    auto& leaf = copy[pointer_of(path)];
    leaf = leaf.get<double>() + delta;
    Corruption c;
    c.path = path;
    try {
      const VerifyOutcome v = verify_document(copy, 0);
      for (const auto& r : v.report.checks()) {
        if (!r.passed) c.failing.push_back(r.name);
      }
    } catch (const Error&) {
      c.failing.push_back("malformed");
    }
    c.rejected = !c.failing.empty();
    out.push_back(std::move(c));
  }
  return out;
}

std::string exemption_reason(const std::string& path, SigmaKind kind) {
  if (path == "certificate.gamma.r") return "C_gamma does not depend on the central part r of gamma";
  if (path == "certificate.gamma.u_initial_data.base_t") return "u = 0, so its base time carries no data";
  if (kind == SigmaKind::Translational && starts_with(path, "spec.gram[")) {
    const bool diagonal = path == "spec.gram[0][0]" || path == "spec.gram[1][1]" || path == "spec.gram[2][2]";
    if (diagonal) return "A and B are diagonal, so a diagonal change of the gram keeps every condition";
  }
  if (kind == SigmaKind::Dilational && path == "spec.gram[1][1]") {
    return "sigma on E and the lattice do not involve the middle gram entry";
  }
  return {};
}

std::vector<std::string> expected_checks(const std::string& path) {
  if (path == "spec.n") return {"spec_dimension", "malformed"};
  if (starts_with(path, "spec.gram")) return {"spec_gram", "spec_operator", "sigma_isometry", "l_first_order"};
  // A and f enter through the solution space, so a change that keeps the
  // spec valid shows up as L or the lattice losing invariance.
  if (starts_with(path, "spec.A")) {
    return {"spec_operator", "sigma_conformal", "l_first_order", "l_sigma_invariant", "lattice_invariant"};
  }
  if (starts_with(path, "spec.interval")) return {"spec_interval", "sigma_interval", "malformed"};
  if (starts_with(path, "spec.profile")) {
    return {"spec_profile", "sigma_profile", "l_first_order", "l_sigma_invariant", "lattice_invariant"};
  }
  if (starts_with(path, "certificate.gamma.q") || starts_with(path, "certificate.gamma.p")) {
    return {"sigma_conformal", "sigma_interval", "sigma_profile", "l_sigma_invariant"};
  }
  if (starts_with(path, "certificate.gamma.C")) return {"sigma_isometry", "sigma_conformal", "l_sigma_invariant"};
  if (starts_with(path, "certificate.gamma")) return {"lattice_invariant", "gamma_pullback"};
  if (starts_with(path, "certificate.L")) return {"l_basis", "l_first_order", "l_sigma_invariant", "lattice_invariant"};
  if (starts_with(path, "certificate.lattice.theta")) return {"theta_intersection", "omega_integral"};
  if (starts_with(path, "certificate.lattice")) {
    return {"lattice_full_rank", "lattice_invariant", "lattice_unimodular", "theta_intersection", "omega_integral"};
  }
  return {};
}

}  // namespace ecs::testing
