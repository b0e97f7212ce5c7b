#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ecs/audit.hpp"
#include "ecs/cli.hpp"
#include "ecs/construct.hpp"
#include "ecs/error.hpp"
#include "ecs/serialize.hpp"

namespace py = pybind11;
using namespace ecs;

namespace {

// Documents cross the boundary as JSON text; the Python layer parses them.
std::string report_text(const QuotientCertificate& cert, std::uint64_t seed) {
  VerifyOutcome v = verify_document(certificate_to_json(cert), seed);
  return report_to_json(*v.cert).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compact quotients of plane waves with parallel Weyl curvature";

  static py::exception<Error> ecs_error(m, "EcsError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = ecs_error;
      py::object inst = err(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(ecs_error.ptr(), inst.ptr());
    }
  });

  m.def(
      "build_dilational",
      [](int n, int trace, std::uint64_t seed) { return report_text(*build_dilational(n, trace).cert, seed); },
      py::arg("n"), py::arg("trace") = 3, py::arg("seed") = 0,
      "Report JSON of the dilational quotient in odd dimension n.");

  m.def(
      "build_translational",
      [](int n, std::optional<std::vector<long long>> charpoly, double seed_amp, double period, double theta,
         std::uint64_t seed) {
        const IntegerThetaMatrix tm = charpoly ? validate_charpoly(*charpoly) : search_integer_theta(n - 2);
        TranslationalOptions o;
        o.seed_amplitude = seed_amp;
        o.period = period;
        o.theta = theta;
        return report_text(build_translational(n, tm, o).cert, seed);
      },
      py::arg("n"), py::arg("charpoly") = py::none(), py::arg("seed_amp") = 0.3, py::arg("period") = 1.0,
      py::arg("theta") = 1.0, py::arg("seed") = 0,
      "Report JSON of a translational quotient; charpoly is ascending c0..1.");

  m.def(
      "verify",
      [](const std::string& text, std::uint64_t seed) {
        VerifyOutcome v = verify_document(parse_document(text), seed);
        py::dict out;
        out["passed"] = v.report.all_passed();
        out["checks"] = checks_to_json(v.report).dump();
        out["report"] = v.cert ? py::object(py::str(report_to_json(*v.cert).dump())) : py::object(py::none());
        return out;
      },
      py::arg("document"), py::arg("seed") = 0, "Re-runs every check on a report or bare certificate.");

  m.def(
      "curvature_audit",
      [](const std::string& spec_text, int samples, double step, std::uint64_t seed) {
        const Json doc = parse_document(spec_text);
        const Json& sj = doc.contains("spec") ? doc["spec"] : doc;
        const PlaneWaveSpec spec = spec_from_json(sj);
        const CurvatureAudit a = curvature_audit(spec, samples, step, seed);
        py::dict out;
        out["ricci"] = a.ricci;
        out["weyl"] = a.weyl;
        out["nabla_weyl"] = a.nabla_weyl;
        out["scalar"] = a.scalar;
        out["olszak_rank"] = a.olszak_rank;
        out["passed"] = curvature_checks(a).all_passed();
        return out;
      },
      py::arg("spec"), py::arg("samples") = 20, py::arg("step") = 1e-4, py::arg("seed") = 0);

  m.def(
      "search_zspectral",
      [](int m_, int k) {
        const ZSpectralSystem s = search_zspectral(m_, k);
        return py::make_tuple(s.e, s.j);
      },
      py::arg("m"), py::arg("k"), "(E, J) of the first Z-spectral system found.");

  m.def(
      "search_integer_theta", [](int m_) { return search_integer_theta(m_).charpoly; }, py::arg("m"),
      "Ascending coefficients of the first admissible characteristic polynomial.");

  m.def(
      "is_generic",
      [](const Mat& gram, const Mat& a) {
        const PseudoSpace space(gram);
        const Genericity g = is_generic(space, check_operator(space, a));
        return py::make_tuple(g.generic, g.centralizer_dim);
      },
      py::arg("gram"), py::arg("a"), "(generic, centralizer dimension) of A on (V, gram).");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one ecsq invocation; returns (exit code, stdout, stderr).");
}
