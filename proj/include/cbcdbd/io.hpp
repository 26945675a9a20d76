#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbcdbd/bounds.hpp"
#include "cbcdbd/errors.hpp"
#include "cbcdbd/lattice.hpp"
#include "cbcdbd/weights.hpp"

namespace cbcdbd::io {

using json = nlohmann::json;

/// Parses a weight specification:
///   {"kind": "product" | "pod" | "general", "s_max": int,
///    "gammas": [...], "Gammas": [...], "values": [{"subset": [...], "value": x}]}
/// Unknown fields, and fields that do not belong to the given kind, are rejected.
WeightScheme weights_from_json(const json& doc, const Limits& limits = {});
json weights_to_json(const WeightScheme& scheme);
WeightScheme load_weights(const std::string& path, const Limits& limits = {});

json diagnostics_to_json(const Diagnostics& diagnostics, bool include_timing = true);

/// {"n", "N", "z", "digit_history", "diagnostics"} (+ "manifest" when given).
json vector_to_json(const GeneratingVector& gv, const Diagnostics* diagnostics = nullptr);
GeneratingVector vector_from_json(const json& doc);
GeneratingVector load_vector(const std::string& path);

/// Provenance of one CLI run; identical manifests give identical payloads (timings aside).
struct RunManifest {
  std::string command;
  std::string config_digest;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;
  std::string tool_version;
};

json manifest_to_json(const RunManifest& manifest);

/// %.17g, which round-trips every double.
std::string format_double(double value);
std::string hex_digest(std::uint64_t value);

json report_to_json(const BoundReport& report);

void write_text(const std::string& path, const std::string& text);

}  // namespace cbcdbd::io
