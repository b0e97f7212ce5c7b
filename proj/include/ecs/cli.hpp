#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ecs/serialize.hpp"

namespace ecs {

/// Exit statuses of the command-line front end.
enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitInputError = 2 };

struct VerifyOutcome {
  CheckReport report;
  std::optional<QuotientCertificate> cert;  // absent when the document has no usable certificate
};

/// What `ecsq verify` runs on a parsed report or bare certificate:
/// structural checks, verify_certificate and the invariant suite. Throws
/// MalformedDocument on shape errors.
VerifyOutcome verify_document(const Json& doc, std::uint64_t seed);

/// Runs one ecsq invocation. `args` excludes the program name. JSON goes to
/// `out` (for --out -) or to a file, the check table to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecs
