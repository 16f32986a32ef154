#pragma once

// JSON forms shared by every module and the CLI:
//   state     {"subsystems":[{"name","dim"}], "kind":"pure"|"mixed", "data":{"re":[...],"im":[...]}}
//   isometry  {"kind":"isometry", "inputs":[...], "subsystems":[...outputs], "data":{...}}
//   channel   {"stinespring":<isometry>, "env_labels":[...]}
// Matrices are flattened row-major.

#include <json.hpp>

#include "ssclab/qcore.hpp"

namespace ssclab {

using json = nlohmann::json;

json to_json(const LabeledState& s);
json to_json(const IsometryMap& iso);
json to_json(const QuantumChannel& ch);
json to_json(const Instrument& inst);
json matrix_to_json(const Mat& m);

/// Parsers throw ValidationError whose field() is a JSON path such as "$.data.re".
LabeledState state_from_json(const json& j);
IsometryMap isometry_from_json(const json& j, const std::string& path = "$");
QuantumChannel channel_from_json(const json& j);
Instrument instrument_from_json(const json& j, const std::string& path = "$");
Mat matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const std::string& path);

}  // namespace ssclab
