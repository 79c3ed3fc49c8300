#pragma once

// File formats: instance and report JSON (rationals as "p/q" strings) and a
// single-block SDPA sparse reader.

#include <istream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "spectra/certify.hpp"
#include "spectra/generate.hpp"
#include "spectra/reduce.hpp"
#include "spectra/system.hpp"

namespace spectra {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolName = "spectra-cert";
inline constexpr const char* kToolVersion = "0.1.0";

struct Instance {
  SdpSystem system;
  std::vector<IterationHint> hints;
  std::optional<json> ground_truth;
};

json rational_to_json(const Rational& x);
Rational rational_from_json(const json& j);  // string or integer
json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols);
/// Accepts the full n x n matrix or the ragged upper triangle; symmetry is
/// enforced.
SymMatrix sym_from_json(const json& j, std::size_t n);
json vector_to_json(const RatVector& v);
RatVector vector_from_json(const json& j);

json system_to_json(const SdpSystem& s);
SdpSystem system_from_json(const json& j);

std::vector<IterationHint> hints_from_json(const json& j, std::size_t m,
                                           std::size_t n);

json instance_to_json(const Instance& inst);
/// Throws ParseError on malformed input.
Instance instance_from_json(const json& j);
Instance read_instance(const std::string& path);

json ground_truth_to_json(const GeneratedInstance& g);

json report_verification(const VerificationReport& rep);

/// Report for an analyze run; metadata is copied verbatim.
json certificate_to_json(const Certificate& cert, const VerificationReport& rep,
                         const json& metadata);
/// Inverse of certificate_to_json for the fields verify needs.
Certificate certificate_from_json(const json& j);

/// Re-runs every exact check on a certificate against its source system.
VerificationReport verify_certificate(const SdpSystem& source,
                                      const Certificate& cert);

json probe_to_json(const DualityProbe& probe);

/// SDPA sparse format (one psd block). F_0 (the objective) is ignored.
SdpSystem import_sdpa(std::istream& in);
SdpSystem import_sdpa_file(const std::string& path);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);
std::string utc_timestamp();

}  // namespace spectra
