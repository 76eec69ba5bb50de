#pragma once

// JSON artifacts. Exact values are "p/q" strings in lowest terms, float values
// are JSON numbers. Every artifact object carries a "schema" field; keys are
// emitted in sorted order so identical inputs give byte-identical output.

#include <string>
#include <variant>

#include <json.hpp>

#include "mixid/charpoly.hpp"
#include "mixid/counterexample.hpp"
#include "mixid/model.hpp"
#include "mixid/projection.hpp"
#include "mixid/recovery.hpp"

namespace mixid::io {

using json = nlohmann::json;

inline constexpr const char* kModelSchema = "mixid.model/1";
inline constexpr const char* kTensorSchema = "mixid.tensor/1";
inline constexpr const char* kPolySchema = "mixid.charpoly/1";
inline constexpr const char* kCxSpecSchema = "mixid.cxspec/1";
inline constexpr const char* kCxPairSchema = "mixid.cxpair/1";
inline constexpr const char* kCxReportSchema = "mixid.cxreport/1";
inline constexpr const char* kRecoverySchema = "mixid.recovery/1";
inline constexpr const char* kProbeSchema = "mixid.probe/1";
inline constexpr const char* kSeparabilitySchema = "mixid.separability/1";

using AnyParams = std::variant<ExactParams, FloatParams>;
using AnyTensor = std::variant<ExactTensor, FloatTensor>;

json to_json(const ExactParams& p);
json to_json(const FloatParams& p);
json to_json(const ExactTensor& t);
json to_json(const FloatTensor& t);
json to_json(const ExactPolynomial& p);
json to_json(const CounterexampleSpec& s);
json to_json(const CounterexamplePair& pair);
json to_json(const VerificationReport& r);
json to_json(const RecoveryConfig& c);
json to_json(const RecoveryReport& r);
json to_json(const ProbeReport& r);

// Exact when every value is a rational string (or integer), float when any
// value is a non-integral JSON number.
AnyParams params_from_json(const json& j);
AnyTensor tensor_from_json(const json& j);
ExactPolynomial poly_from_json(const json& j);
// Accepts a bare array of 0-based states or {"states": [...]}.
StateSelector selector_from_json(const json& j);
// alpha/beta optional; defaults come from default_scale.
CounterexampleSpec cx_spec_from_json(const json& j);
CounterexamplePair cx_pair_from_json(const json& j);

ExactParams require_exact(const AnyParams& p);
ExactTensor require_exact(const AnyTensor& t);

bool is_model(const json& j);
bool is_tensor(const json& j);

json read_json_file(const std::string& path);  // "-" reads stdin
void write_json(const json& j, const std::string& path);  // "" or "-" writes stdout
std::string dump(const json& j);

}  // namespace mixid::io
