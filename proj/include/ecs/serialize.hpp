#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ecs/quotient.hpp"

namespace ecs {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

// Writers. Infinite values are written as null.
Json matrix_to_json(const Mat& m);
Json spec_to_json(const PlaneWaveSpec& spec);
Json profile_to_json(const Profile& profile);
Json isometry_to_json(const Isometry& phi);
Json subspace_to_json(const Subspace& l);
Json lattice_to_json(const LatticeData& lattice);
Json riccati_to_json(const RiccatiCurve& b);
Json checks_to_json(const CheckReport& report);
Json classification_to_json(const Classification& c);

/// {version, spec, gamma, L, lattice}
Json certificate_to_json(const QuotientCertificate& cert);
/// {version, spec, certificate: {gamma, L, lattice}, checks, classification}
Json report_to_json(const QuotientCertificate& cert);
/// {version, spec, checks}
Json spec_report_to_json(const PlaneWaveSpec& spec, const CheckReport& checks);

/// Throws MalformedDocument on empty input or invalid JSON.
Json parse_document(const std::string& text);

// Readers. Shape and type errors and unknown fields throw MalformedDocument.
// Content that parses but is inconsistent (nonsymmetric gram, n != dim V + 2,
// interval type disagreeing with its bounds) becomes a failing entry of
// `structural` instead, so verify can name it.
struct SpecReading {
  std::optional<PlaneWaveSpec> spec;
  CheckReport structural;
};
SpecReading read_spec(const Json& j);

/// Strict reader for spec-only use: structural failures throw InvalidSpec and
/// the result goes through PlaneWaveSpec::make.
PlaneWaveSpec spec_from_json(const Json& j);

Profile profile_from_json(const Json& j);
RiccatiCurve riccati_from_json(const Json& j);

struct CertificateReading {
  std::optional<QuotientCertificate> cert;
  CheckReport structural;
};
/// Accepts a report document or a bare certificate.
CertificateReading read_certificate(const Json& doc);

}  // namespace ecs
