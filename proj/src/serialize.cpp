#include "ecs/serialize.hpp"

#include <cmath>
#include <set>

#include "ecs/error.hpp"

namespace ecs {

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::MalformedDocument, where + ": " + what);
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

template <class T>
Json list_to_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(num(x));
  return a;
}

Json fourier_to_json(const FourierSeries& s) {
  return {{"period", s.period}, {"a0", s.a0}, {"cos", list_to_json(s.cos)}, {"sin", list_to_json(s.sin)}};
}

void expect_object(const Json& j, const std::string& where, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) malformed(where, "expected an object");
  std::set<std::string> known;
  for (const char* k : required) {
    known.insert(k);
    if (!j.contains(k)) malformed(where, std::string("missing field '") + k + "'");
  }
  for (const char* k : optional) known.insert(k);
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) malformed(where, "unknown field '" + item.key() + "'");
  }
}

double get_num(const Json& j, const std::string& where) {
  if (!j.is_number()) malformed(where, "expected a number");
  return j.get<double>();
}

// null stands for the given infinity.
double get_num_or_inf(const Json& j, double inf, const std::string& where) {
  if (j.is_null()) return inf;
  return get_num(j, where);
}

std::vector<double> get_list(const Json& j, const std::string& where) {
  if (!j.is_array()) malformed(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_num(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Vec get_vec(const Json& j, const std::string& where, Eigen::Index expected = -1) {
  const auto xs = get_list(j, where);
  if (expected >= 0 && static_cast<Eigen::Index>(xs.size()) != expected) {
    malformed(where, "expected " + std::to_string(expected) + " entries");
  }
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Mat get_mat(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) malformed(where, "expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) malformed(where, "rows must be nonempty arrays");
  Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto row = get_list(j[r], where + "[" + std::to_string(r) + "]");
    if (row.size() != cols) malformed(where, "ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  return m;
}

const std::string& get_string(const Json& j, const std::string& where) {
  if (!j.is_string()) malformed(where, "expected a string");
  return j.get_ref<const std::string&>();
}

FourierSeries fourier_from_json(const Json& j, const std::string& where) {
  expect_object(j, where, {"period", "a0", "cos", "sin"});
  FourierSeries s;
  s.period = get_num(j["period"], where + ".period");
  if (!(s.period > 0.0)) malformed(where, "period must be positive");
  s.a0 = get_num(j["a0"], where + ".a0");
  s.cos = get_list(j["cos"], where + ".cos");
  s.sin = get_list(j["sin"], where + ".sin");
  return s;
}

void check_version(const Json& doc) {
  if (get_string(doc["version"], "version") != kSchemaVersion) {
    malformed("version", "unsupported schema version '" + doc["version"].get<std::string>() + "'");
  }
}

SolutionVector solution_from_json(const Json& j, const std::string& where, int m) {
  expect_object(j, where, {"base_t", "value", "velocity"});
  SolutionVector u;
  u.base_t = get_num(j["base_t"], where + ".base_t");
  u.value = get_vec(j["value"], where + ".value", m);
  u.velocity = get_vec(j["velocity"], where + ".velocity", m);
  return u;
}

void validate_checks(const Json& j) {
  if (!j.is_array()) malformed("checks", "expected an array");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "checks[" + std::to_string(i) + "]";
    expect_object(j[i], where, {"name", "passed", "residual", "tolerance"}, {"detail"});
    get_string(j[i]["name"], where + ".name");
    if (!j[i]["passed"].is_boolean()) malformed(where + ".passed", "expected a boolean");
    (void)get_num_or_inf(j[i]["residual"], 0.0, where + ".residual");
    (void)get_num_or_inf(j[i]["tolerance"], 0.0, where + ".tolerance");
    if (j[i].contains("detail")) get_string(j[i]["detail"], where + ".detail");
  }
}

void validate_classification(const Json& j) {
  expect_object(j, "classification", {"type", "complete", "fiber", "base_parameter"});
  get_string(j["type"], "classification.type");
  if (!j["complete"].is_boolean()) malformed("classification.complete", "expected a boolean");
  get_string(j["fiber"], "classification.fiber");
  get_num(j["base_parameter"], "classification.base_parameter");
}

}  // namespace

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_to_json(m.row(r).transpose()));
  return rows;
}

Json profile_to_json(const Profile& profile) {
  Json params;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, InverseSquareProfile>) {
          params = {{"coeff", k.coeff}, {"pole", k.pole}};
        } else if constexpr (std::is_same_v<K, FourierProfile>) {
          params = fourier_to_json(k.series);
        } else {
          params = {{"coeff", k.coeff}, {"ratio", k.ratio}, {"cos", list_to_json(k.cos)}, {"sin", list_to_json(k.sin)}};
        }
      },
      profile.kind());
  return {{"kind", profile.kind_name()}, {"params", params}};
}

Json spec_to_json(const PlaneWaveSpec& spec) {
  const char* type = "open";
  switch (spec.interval().kind()) {
    case Interval::Kind::Real: type = "real"; break;
    case Interval::Kind::Positive: type = "positive"; break;
    case Interval::Kind::Open: break;
  }
  return {{"n", spec.n()},
          {"gram", matrix_to_json(spec.space().gram())},
          {"A", matrix_to_json(spec.a())},
          {"interval", {{"type", type}, {"bounds", {num(spec.interval().lo()), num(spec.interval().hi())}}}},
          {"profile", profile_to_json(spec.profile())}};
}

Json isometry_to_json(const Isometry& phi) {
  return {{"q", phi.sigma.q},
          {"p", phi.sigma.p},
          {"C", matrix_to_json(phi.sigma.c)},
          {"r", phi.r},
          {"u_initial_data",
           {{"base_t", phi.u.base_t}, {"value", vec_to_json(phi.u.value)}, {"velocity", vec_to_json(phi.u.velocity)}}}};
}

Json subspace_to_json(const Subspace& l) {
  Json basis = Json::array();
  for (int i = 0; i < l.dim(); ++i) {
    const SolutionVector u = l.vector(i);
    basis.push_back({{"value", vec_to_json(u.value)}, {"velocity", vec_to_json(u.velocity)}});
  }
  return {{"base_t", l.base_t()}, {"basis", basis}};
}

Json lattice_to_json(const LatticeData& lattice) {
  Json basis = Json::array();
  for (Eigen::Index c = 0; c < lattice.basis.cols(); ++c) {
    const Vec col = lattice.basis.col(c);
    basis.push_back({{"r", col(0)}, {"coeffs", vec_to_json(col.tail(col.size() - 1))}});
  }
  return {{"basis", basis}, {"theta", lattice.theta}};
}

Json riccati_to_json(const RiccatiCurve& b) {
  Json out{{"kind", b.kind_name()}};
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ConstantDiagonal>) {
          out["entries"] = vec_to_json(k.entries);
        } else if constexpr (std::is_same_v<K, FourierDiagonal>) {
          Json e = Json::array();
          for (const auto& s : k.entries) e.push_back(fourier_to_json(s));
          out["entries"] = e;
        } else {
          out["nodes"] = list_to_json(k.nodes);
          Json values = Json::array();
          Json derivs = Json::array();
          for (const auto& v : k.values) values.push_back(matrix_to_json(v));
          for (const auto& d : k.derivatives) derivs.push_back(matrix_to_json(d));
          out["values"] = values;
          out["derivatives"] = derivs;
          out["period"] = k.period ? Json(*k.period) : Json(nullptr);
        }
      },
      b.kind());
  return out;
}

Json checks_to_json(const CheckReport& report) {
  Json a = Json::array();
  for (const auto& c : report.checks()) {
    a.push_back({{"name", c.name},
                 {"passed", c.passed},
                 {"residual", num(c.residual)},
                 {"tolerance", num(c.tolerance)},
                 {"detail", c.detail}});
  }
  return a;
}

Json classification_to_json(const Classification& c) {
  return {{"type", std::string(to_string(c.type))},
          {"complete", c.complete},
          {"fiber", c.fiber},
          {"base_parameter", c.base_parameter}};
}

Json certificate_to_json(const QuotientCertificate& cert) {
  return {{"version", kSchemaVersion},
          {"spec", spec_to_json(cert.spec)},
          {"gamma", isometry_to_json(cert.gamma)},
          {"L", subspace_to_json(cert.l)},
          {"lattice", lattice_to_json(cert.lattice)}};
}

Json report_to_json(const QuotientCertificate& cert) {
  Json out{{"version", kSchemaVersion},
           {"spec", spec_to_json(cert.spec)},
           {"certificate",
            {{"gamma", isometry_to_json(cert.gamma)},
             {"L", subspace_to_json(cert.l)},
             {"lattice", lattice_to_json(cert.lattice)}}},
           {"checks", checks_to_json(cert.checks)}};
  if (cert.classification) out["classification"] = classification_to_json(*cert.classification);
  return out;
}

Json spec_report_to_json(const PlaneWaveSpec& spec, const CheckReport& checks) {
  return {{"version", kSchemaVersion}, {"spec", spec_to_json(spec)}, {"checks", checks_to_json(checks)}};
}

Json parse_document(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) malformed("document", "empty input");
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    malformed("document", e.what());
  }
}

Profile profile_from_json(const Json& j) {
  expect_object(j, "profile", {"kind", "params"});
  const std::string& kind = get_string(j["kind"], "profile.kind");
  const Json& p = j["params"];
  if (kind == "inverse_square") {
    expect_object(p, "profile.params", {"coeff", "pole"});
    return Profile::inverse_square(get_num(p["coeff"], "profile.params.coeff"), get_num(p["pole"], "profile.params.pole"));
  }
  if (kind == "fourier") return Profile::fourier(fourier_from_json(p, "profile.params"));
  if (kind == "log_periodic") {
    expect_object(p, "profile.params", {"coeff", "ratio", "cos", "sin"});
    LogPeriodicProfile lp;
    lp.coeff = get_num(p["coeff"], "profile.params.coeff");
    lp.ratio = get_num(p["ratio"], "profile.params.ratio");
    if (!(lp.ratio > 0.0) || lp.ratio == 1.0) malformed("profile.params.ratio", "ratio must be positive and != 1");
    lp.cos = get_list(p["cos"], "profile.params.cos");
    lp.sin = get_list(p["sin"], "profile.params.sin");
    return Profile(lp);
  }
  malformed("profile.kind", "unknown profile kind '" + kind + "'");
}

SpecReading read_spec(const Json& j) {
  expect_object(j, "spec", {"n", "gram", "A", "interval", "profile"});
  SpecReading out;
  const double n = get_num(j["n"], "spec.n");
  const Mat gram = get_mat(j["gram"], "spec.gram");
  const Mat a = get_mat(j["A"], "spec.A");
  if (gram.rows() != gram.cols()) malformed("spec.gram", "must be square");
  if (a.rows() != gram.rows() || a.cols() != gram.cols()) malformed("spec.A", "must match the gram shape");
  const Json& iv = j["interval"];
  expect_object(iv, "spec.interval", {"type", "bounds"});
  const std::string& type = get_string(iv["type"], "spec.interval.type");
  if (type != "real" && type != "positive" && type != "open") malformed("spec.interval.type", "unknown type '" + type + "'");
  const Json& bounds = iv["bounds"];
  if (!bounds.is_array() || bounds.size() != 2) malformed("spec.interval.bounds", "expected [lo, hi]");
  const double inf = std::numeric_limits<double>::infinity();
  const double lo = get_num_or_inf(bounds[0], -inf, "spec.interval.bounds[0]");
  const double hi = get_num_or_inf(bounds[1], inf, "spec.interval.bounds[1]");
  const Profile profile = profile_from_json(j["profile"]);

  const double m = static_cast<double>(gram.rows());
  const double dim_err = std::abs(n - (m + 2.0));
  out.structural.add({"spec_dimension", dim_err == 0.0, dim_err, 0.0, "n = dim V + 2"});

  std::optional<PseudoSpace> space;
  try {
    space.emplace(gram);
    out.structural.add({"spec_gram", true, 0.0, 0.0, "gram symmetric and nondegenerate"});
  } catch (const Error& e) {
    out.structural.add({"spec_gram", false, (gram - gram.transpose()).cwiseAbs().maxCoeff(), 0.0, e.what()});
  }

  std::optional<Interval> interval;
  try {
    interval.emplace(Interval::open(lo, hi));
    const bool match = (type == "real" && interval->kind() == Interval::Kind::Real) ||
                       (type == "positive" && interval->kind() == Interval::Kind::Positive) ||
                       (type == "open" && interval->kind() == Interval::Kind::Open);
    out.structural.add({"spec_interval", match, match ? 0.0 : 1.0, 0.0,
                        match ? "type agrees with bounds" : "type '" + type + "' disagrees with the bounds"});
  } catch (const Error& e) {
    out.structural.add({"spec_interval", false, 1.0, 0.0, e.what()});
  }
  if (space && interval) {
    try {
      out.spec = PlaneWaveSpec::unchecked(*space, a, *interval, profile);
    } catch (const Error& e) {
      out.structural.add({"spec_profile", false, 1.0, 0.0, e.what()});
    }
  }
  return out;
}

PlaneWaveSpec spec_from_json(const Json& j) {
  SpecReading r = read_spec(j);
  for (const auto& c : r.structural.checks()) {
    if (!c.passed) throw Error(ErrorCode::InvalidSpec, c.name + ": " + c.detail);
  }
  const PlaneWaveSpec& s = *r.spec;
  return PlaneWaveSpec::make(s.space(), s.a(), s.interval(), s.profile());
}

RiccatiCurve riccati_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) malformed("riccati", "missing field 'kind'");
  const std::string& kind = get_string(j["kind"], "riccati.kind");
  if (kind == "constant_diagonal") {
    expect_object(j, "riccati", {"kind", "entries"});
    return RiccatiCurve(ConstantDiagonal{get_vec(j["entries"], "riccati.entries")});
  }
  if (kind == "fourier_diagonal") {
    expect_object(j, "riccati", {"kind", "entries"});
    if (!j["entries"].is_array()) malformed("riccati.entries", "expected an array");
    FourierDiagonal fd;
    for (std::size_t i = 0; i < j["entries"].size(); ++i) {
      fd.entries.push_back(fourier_from_json(j["entries"][i], "riccati.entries[" + std::to_string(i) + "]"));
    }
    return RiccatiCurve(std::move(fd));
  }
  if (kind == "sampled") {
    expect_object(j, "riccati", {"kind", "nodes", "values", "derivatives", "period"});
    SampledCurve sc;
    sc.nodes = get_list(j["nodes"], "riccati.nodes");
    for (const char* key : {"values", "derivatives"}) {
      if (!j[key].is_array() || j[key].size() != sc.nodes.size()) {
        malformed(std::string("riccati.") + key, "expected one matrix per node");
      }
      auto& dst = std::string(key) == "values" ? sc.values : sc.derivatives;
      for (std::size_t i = 0; i < j[key].size(); ++i) dst.push_back(get_mat(j[key][i], std::string("riccati.") + key));
    }
    if (!j["period"].is_null()) sc.period = get_num(j["period"], "riccati.period");
    return RiccatiCurve(std::move(sc));
  }
  malformed("riccati.kind", "unknown kind '" + kind + "'");
}

CertificateReading read_certificate(const Json& doc) {
  if (!doc.is_object()) malformed("document", "expected an object");
  const bool report = doc.contains("certificate");
  if (report) {
    expect_object(doc, "document", {"version", "spec", "certificate"}, {"checks", "classification"});
    if (doc.contains("checks")) validate_checks(doc["checks"]);
    if (doc.contains("classification")) validate_classification(doc["classification"]);
  } else {
    expect_object(doc, "document", {"version", "spec", "gamma", "L", "lattice"});
  }
  check_version(doc);
  const Json& body = report ? doc["certificate"] : doc;
  if (report) expect_object(body, "certificate", {"gamma", "L", "lattice"});

  CertificateReading out;
  SpecReading sr = read_spec(doc["spec"]);
  out.structural = std::move(sr.structural);
  const int m = static_cast<int>(get_mat(doc["spec"]["gram"], "spec.gram").rows());

  const Json& g = body["gamma"];
  expect_object(g, "gamma", {"q", "p", "C", "r", "u_initial_data"});
  SigmaElement sigma;
  sigma.q = get_num(g["q"], "gamma.q");
  sigma.p = get_num(g["p"], "gamma.p");
  sigma.c = get_mat(g["C"], "gamma.C");
  if (sigma.c.rows() != m || sigma.c.cols() != m) malformed("gamma.C", "must be m x m");
  const double r = get_num(g["r"], "gamma.r");
  SolutionVector u = solution_from_json(g["u_initial_data"], "gamma.u_initial_data", m);

  const Json& lj = body["L"];
  expect_object(lj, "L", {"base_t", "basis"});
  const double lbase = get_num(lj["base_t"], "L.base_t");
  if (!lj["basis"].is_array() || lj["basis"].empty()) malformed("L.basis", "expected a nonempty array");
  Mat lbasis(2 * m, static_cast<Eigen::Index>(lj["basis"].size()));
  for (std::size_t i = 0; i < lj["basis"].size(); ++i) {
    const std::string where = "L.basis[" + std::to_string(i) + "]";
    const Json& e = lj["basis"][i];
    expect_object(e, where, {"value", "velocity"});
    lbasis.col(static_cast<Eigen::Index>(i)) << get_vec(e["value"], where + ".value", m),
        get_vec(e["velocity"], where + ".velocity", m);
  }

  const Json& latj = body["lattice"];
  expect_object(latj, "lattice", {"basis", "theta"});
  const double theta = get_num(latj["theta"], "lattice.theta");
  if (!latj["basis"].is_array() || latj["basis"].empty()) malformed("lattice.basis", "expected a nonempty array");
  Mat lat(m + 1, static_cast<Eigen::Index>(latj["basis"].size()));
  for (std::size_t i = 0; i < latj["basis"].size(); ++i) {
    const std::string where = "lattice.basis[" + std::to_string(i) + "]";
    const Json& e = latj["basis"][i];
    expect_object(e, where, {"r", "coeffs"});
    lat.col(static_cast<Eigen::Index>(i)) << get_num(e["r"], where + ".r"), get_vec(e["coeffs"], where + ".coeffs", m);
  }

  if (!sr.spec) return out;
  std::optional<Subspace> l;
  try {
    l.emplace(lbase, lbasis);
  } catch (const Error& e) {
    out.structural.add({"l_basis", false, 1.0, 0.0, e.what()});
    return out;
  }
  const PlaneWaveSpec& spec = *sr.spec;
  Isometry gamma{sigma, r, std::move(u), spec.fingerprint()};
  out.cert.emplace(QuotientCertificate{spec, std::move(gamma), std::move(*l), LatticeData{lat, theta}, {}, {}});
  return out;
}

}  // namespace ecs
