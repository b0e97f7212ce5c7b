#include "ecs/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ecs/audit.hpp"
#include "ecs/construct.hpp"
#include "ecs/error.hpp"
#include "ecs/serialize.hpp"

namespace ecs {

namespace {

constexpr int kInvariantSamples = 4;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* app, Common& c, const std::string& default_out) {
  c.out = default_out;
  app->add_option("--seed", c.seed, "seed for random sample points")->capture_default_str();
  app->add_option("--out", c.out, "JSON output file, - for stdout")->capture_default_str();
}

void print_table(const CheckReport& report, std::ostream& err) {
  std::size_t width = 4;
  for (const auto& c : report.checks()) width = std::max(width, c.name.size());
  err << std::left << std::setw(static_cast<int>(width)) << "check"
      << "  result  " << std::setw(12) << "residual" << "  " << std::setw(12) << "tolerance" << "  detail\n";
  for (const auto& c : report.checks()) {
    std::ostringstream res;
    std::ostringstream tl;
    res << std::setprecision(4) << c.residual;
    tl << std::setprecision(4) << c.tolerance;
    err << std::setw(static_cast<int>(width)) << c.name << "  " << (c.passed ? "PASS  " : "FAIL  ") << "  "
        << std::setw(12) << res.str() << "  " << std::setw(12) << tl.str() << "  " << c.detail << "\n";
  }
  const auto failed = std::count_if(report.checks().begin(), report.checks().end(),
                                    [](const CheckResult& c) { return !c.passed; });
  err << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << "\n";
}

void emit(const Json& doc, const std::string& target, std::ostream& out) {
  if (target.empty()) return;
  const std::string text = doc.dump(2) + "\n";
  if (target == "-") {
    out << text;
    return;
  }
  std::ofstream f(target);
  if (!f) throw Error(ErrorCode::InvalidSpec, "cannot open output file " + target);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::MalformedDocument, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::CertificateFailed:
    case ErrorCode::FloquetGap:
    case ErrorCode::ConstantTrace:
    case ErrorCode::ResidualTooLarge:
    case ErrorCode::StepFailure:
      return kExitCheckFailure;
    default:
      return kExitInputError;
  }
}

// The emitted report is what verify produces on the serialized certificate,
// so build output and a later verify agree field for field.
int finish(const QuotientCertificate& built, std::uint64_t seed, const std::string& target, std::ostream& out,
           std::ostream& err) {
  VerifyOutcome v = verify_document(certificate_to_json(built), seed);
  if (!v.cert) throw Error(ErrorCode::CertificateFailed, "serialized certificate could not be read back");
  emit(report_to_json(*v.cert), target, out);
  print_table(v.report, err);
  if (v.cert->classification) {
    const auto& c = *v.cert->classification;
    err << "classification: " << to_string(c.type) << " / " << (c.complete ? "complete" : "incomplete") << " / "
        << c.fiber << "\n";
  }
  return v.report.all_passed() ? kExitPass : kExitCheckFailure;
}

std::vector<long long> parse_charpoly(const std::string& text) {
  std::vector<long long> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadPolynomial, "coefficient '" + item + "' is not an integer");
    }
    if (used != item.size()) throw Error(ErrorCode::BadPolynomial, "coefficient '" + item + "' is not an integer");
    c.push_back(v);
  }
  return c;
}

int cmd_build_dilational(int dim, int trace, const Common& common, std::ostream& out, std::ostream& err) {
  if (dim < 5 || dim % 2 == 0) {
    err << "error: dilational examples exist in all odd dimensions n >= 5; got --dim " << dim << "\n";
    return kExitInputError;
  }
  DilationalWitness w = build_dilational(dim, trace);
  err << "Z-spectral system (m=" << w.system.m << ", k=" << w.system.k << ") E =";
  for (int e : w.system.e) err << " " << e;
  err << "  J =";
  for (int j : w.system.j) err << " " << j;
  err << "\nq = " << std::setprecision(17) << w.q << std::setprecision(6) << "\n";
  return finish(*w.cert, common.seed, common.out, out, err);
}

int cmd_build_translational(int dim, const std::string& charpoly, double amp, double period, double theta,
                            const Common& common, std::ostream& out, std::ostream& err) {
  if (dim < 5) {
    err << "error: translational construction needs --dim >= 5\n";
    return kExitInputError;
  }
  const int m = dim - 2;
  IntegerThetaMatrix tm = charpoly.empty() ? search_integer_theta(m) : validate_charpoly(parse_charpoly(charpoly));
  if (static_cast<int>(tm.charpoly.size()) != m + 1) {
    err << "error: --charpoly must have degree dim - 2 = " << m << "\n";
    return kExitInputError;
  }
  err << "charpoly (ascending):";
  for (long long c : tm.charpoly) err << " " << c;
  err << "\n";
  TranslationalOptions opts;
  opts.seed_amplitude = amp;
  opts.period = period;
  opts.theta = theta;
  // Bounded retries: a smaller seed keeps every shooting target further
  // from the stability bands.
  constexpr int kRetries = 3;
  for (int attempt = 0;; ++attempt) {
    try {
      TranslationalWitness w = build_translational(dim, tm, opts);
      return finish(w.cert, common.seed, common.out, out, err);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::FloquetGap || attempt + 1 >= kRetries) throw;
      err << "retrying after " << e.what() << "\n";
      opts.seed_amplitude *= 0.5;
    }
  }
}

int cmd_verify(const std::string& file, double tol_scale, const Common& common, std::ostream& out,
               std::ostream& err) {
  if (tol_scale > 0.0) set_tolerance_scale(tol_scale);
  VerifyOutcome v = verify_document(parse_document(read_file(file)), common.seed);
  if (v.cert) emit(report_to_json(*v.cert), common.out, out);
  print_table(v.report, err);
  return v.report.all_passed() ? kExitPass : kExitCheckFailure;
}

int cmd_curvature(const std::string& file, int samples, double step, const Common& common, std::ostream& out,
                  std::ostream& err) {
  const Json doc = parse_document(read_file(file));
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "document: expected an object");
  const Json& sj = doc.contains("spec") ? doc["spec"] : doc;
  const PlaneWaveSpec spec = spec_from_json(sj);
  const CurvatureAudit audit = curvature_audit(spec, samples, step, common.seed);
  const CheckReport report = curvature_checks(audit);
  emit(spec_report_to_json(spec, report), common.out, out);
  err << "samples " << audit.samples << ", step " << step << ", olszak rank " << audit.olszak_rank << ", "
      << std::setprecision(3) << audit.seconds << " s\n";
  print_table(report, err);
  return report.all_passed() ? kExitPass : kExitCheckFailure;
}

}  // namespace

VerifyOutcome verify_document(const Json& doc, std::uint64_t seed) {
  CertificateReading reading = read_certificate(doc);
  VerifyOutcome v;
  v.report = reading.structural;
  if (reading.cert) {
    QuotientCertificate& cert = *reading.cert;
    v.report.append(verify_certificate(cert));
    v.report.append(invariant_checks(cert, kInvariantSamples, seed));
    cert.checks = v.report;
    try {
      cert.classification = classify_quotient(cert);
    } catch (const Error&) {
      cert.classification.reset();
    }
    v.cert = std::move(reading.cert);
  }
  return v;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compact quotients of plane waves with parallel Weyl curvature", "ecsq"};
  app.require_subcommand(1);

  Common dil_common;
  int dil_dim = 0;
  int dil_trace = 3;
  auto* dil = app.add_subcommand("build-dilational", "build and verify a dilational quotient");
  dil->add_option("--dim", dil_dim, "odd dimension n >= 5")->required();
  dil->add_option("--trace", dil_trace, "integer q + 1/q >= 3")->capture_default_str();
  add_common(dil, dil_common, "-");

  Common tr_common;
  int tr_dim = 0;
  std::string tr_poly;
  double tr_amp = 0.3;
  double tr_period = 1.0;
  double tr_theta = 1.0;
  auto* tr = app.add_subcommand("build-translational", "build and verify a translational quotient");
  tr->add_option("--dim", tr_dim, "dimension n >= 5")->required();
  tr->add_option("--charpoly", tr_poly, "c0,c1,...,1 ascending; omitted means search");
  tr->add_option("--seed-amp", tr_amp, "amplitude of the seed b1 = a cos(2 pi t / p)")->capture_default_str();
  tr->add_option("--period", tr_period, "period p")->capture_default_str();
  tr->add_option("--theta", tr_theta, "theta > 0")->capture_default_str();
  add_common(tr, tr_common, "-");

  Common ver_common;
  std::string ver_file;
  double ver_scale = 0.0;
  auto* ver = app.add_subcommand("verify", "re-run every check on a report or bare certificate");
  ver->add_option("file", ver_file, "JSON document")->required();
  ver->add_option("--tol-scale", ver_scale, "multiply all tolerances (default ECS_TOL_SCALE or 1)");
  add_common(ver, ver_common, "");

  Common cur_common;
  std::string cur_file;
  int cur_samples = 20;
  double cur_step = 1e-4;
  auto* cur = app.add_subcommand("curvature", "audit closed-form curvature against finite differences");
  cur->add_option("--spec", cur_file, "spec, report or certificate JSON")->required();
  cur->add_option("--samples", cur_samples, "number of random points")->capture_default_str();
  cur->add_option("--step", cur_step, "difference step h")->capture_default_str();
  add_common(cur, cur_common, "");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (dil->parsed()) return cmd_build_dilational(dil_dim, dil_trace, dil_common, out, err);
    if (tr->parsed()) {
      return cmd_build_translational(tr_dim, tr_poly, tr_amp, tr_period, tr_theta, tr_common, out, err);
    }
    if (ver->parsed()) {
      if (ver->count("--tol-scale") && !(ver_scale > 0.0)) {
        err << "error: --tol-scale must be positive\n";
        return kExitInputError;
      }
      return cmd_verify(ver_file, ver_scale, ver_common, out, err);
    }
    if (cur->parsed()) return cmd_curvature(cur_file, cur_samples, cur_step, cur_common, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace ecs
