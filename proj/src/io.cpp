#include "cbcdbd/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cbcdbd::io {

namespace {

void reject_unknown(const json& doc, const std::set<std::string>& allowed,
                    const std::string& kind) {
  for (const auto& [key, _] : doc.items()) {
    if (!allowed.contains(key)) {
      throw ValidationError("weights file: field '" + key + "' is not allowed for kind '" + kind +
                            "'");
    }
  }
}

const json& require_field(const json& doc, const char* name) {
  if (!doc.contains(name)) {
    throw ValidationError(std::string("weights file: missing field '") + name + "'");
  }
  return doc.at(name);
}

std::vector<double> number_array(const json& value, const char* name) {
  if (!value.is_array()) throw ValidationError(std::string("weights file: '") + name + "' must be an array");
  std::vector<double> out;
  for (const auto& x : value) {
    if (!x.is_number()) {
      throw ValidationError(std::string("weights file: '") + name + "' must contain numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

WeightScheme weights_from_json(const json& doc, const Limits& limits) {
  if (!doc.is_object()) throw ValidationError("weights file: top level must be an object");
  const auto& kind_value = require_field(doc, "kind");
  if (!kind_value.is_string()) throw ValidationError("weights file: 'kind' must be a string");
  const std::string kind = kind_value.get<std::string>();
  const auto& s_value = require_field(doc, "s_max");
  if (!s_value.is_number_integer() || s_value.get<long long>() < 1 ||
      s_value.get<long long>() > 1'000'000) {
    throw ValidationError("weights file: 's_max' must be a positive integer");
  }
  const int s_max = s_value.get<int>();

  if (kind == "product") {
    reject_unknown(doc, {"kind", "s_max", "gammas"}, kind);
    auto gammas = number_array(require_field(doc, "gammas"), "gammas");
    if (gammas.size() != static_cast<std::size_t>(s_max)) {
      throw ValidationError("weights file: 'gammas' must hold s_max values");
    }
    return WeightScheme::product(std::move(gammas));
  }
  if (kind == "pod") {
    reject_unknown(doc, {"kind", "s_max", "gammas", "Gammas"}, kind);
    auto gammas = number_array(require_field(doc, "gammas"), "gammas");
    auto order = number_array(require_field(doc, "Gammas"), "Gammas");
    if (gammas.size() != static_cast<std::size_t>(s_max)) {
      throw ValidationError("weights file: 'gammas' must hold s_max values");
    }
    if (order.size() != static_cast<std::size_t>(s_max) + 1) {
      throw ValidationError("weights file: 'Gammas' must hold s_max + 1 values (Gamma_0..)");
    }
    return WeightScheme::pod(std::move(order), std::move(gammas));
  }
  if (kind == "general") {
    reject_unknown(doc, {"kind", "s_max", "values"}, kind);
    const auto& values = require_field(doc, "values");
    if (!values.is_array()) throw ValidationError("weights file: 'values' must be an array");
    std::vector<std::pair<std::vector<int>, double>> entries;
    for (const auto& entry : values) {
      if (!entry.is_object()) throw ValidationError("weights file: 'values' entries must be objects");
      for (const auto& [key, _] : entry.items()) {
        if (key != "subset" && key != "value") {
          throw ValidationError("weights file: unknown field '" + key + "' in 'values' entry");
        }
      }
      const auto& subset = require_field(entry, "subset");
      const auto& value = require_field(entry, "value");
      if (!subset.is_array() || !value.is_number()) {
        throw ValidationError("weights file: entry needs an integer array 'subset' and a number 'value'");
      }
      std::vector<int> members;
      for (const auto& j : subset) {
        if (!j.is_number_integer()) throw ValidationError("weights file: subset members must be integers");
        members.push_back(j.get<int>());
      }
      entries.emplace_back(std::move(members), value.get<double>());
    }
    return WeightScheme::general(s_max, entries, limits);
  }
  throw ValidationError("weights file: unknown kind '" + kind + "'");
}

json weights_to_json(const WeightScheme& scheme) {
  json out;
  switch (scheme.kind()) {
    case WeightScheme::Kind::product:
      out["kind"] = "product";
      out["s_max"] = scheme.dimension_bound();
      out["gammas"] = scheme.as_product().gammas;
      break;
    case WeightScheme::Kind::pod:
      out["kind"] = "pod";
      out["s_max"] = scheme.dimension_bound();
      out["gammas"] = scheme.as_pod().gammas;
      out["Gammas"] = scheme.as_pod().order_weights;
      break;
    case WeightScheme::Kind::general: {
      out["kind"] = "general";
      out["s_max"] = scheme.dimension_bound();
      json values = json::array();
      const auto& table = scheme.as_general().table;
      for (std::size_t u = 1; u < table.size(); ++u) {
        values.push_back({{"subset", subset_members(u)}, {"value", table[u]}});
      }
      out["values"] = std::move(values);
      break;
    }
    case WeightScheme::Kind::shifted:
      throw ValidationError("shifted weight views have no file representation");
  }
  return out;
}

WeightScheme load_weights(const std::string& path, const Limits& limits) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open weights file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError("weights file '" + path + "' is not valid JSON: " + e.what());
  }
  return weights_from_json(doc, limits);
}

json diagnostics_to_json(const Diagnostics& diagnostics, bool include_timing) {
  json out;
  out["path"] = diagnostics.path;
  out["quality_evaluations"] = diagnostics.quality_evaluations;
  out["table_doubles"] = diagnostics.table_doubles;
  out["T_value"] = diagnostics.t_value ? json(*diagnostics.t_value) : json(nullptr);
  out["H_value"] = diagnostics.h_value ? json(*diagnostics.h_value) : json(nullptr);
  out["dual_error"] = diagnostics.dual_error ? json(*diagnostics.dual_error) : json(nullptr);
  out["bound_values"] = diagnostics.bound_values;
  if (include_timing) out["timing_seconds"] = diagnostics.timing_seconds;
  return out;
}

json vector_to_json(const GeneratingVector& gv, const Diagnostics* diagnostics) {
  json out;
  out["n"] = gv.digits();
  out["N"] = gv.points();
  out["z"] = std::vector<std::uint64_t>(gv.components().begin(), gv.components().end());
  out["digit_history"] = gv.history();
  if (diagnostics != nullptr) out["diagnostics"] = diagnostics_to_json(*diagnostics);
  return out;
}

GeneratingVector vector_from_json(const json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    if (n < 1 || n > kMaxDigits) throw ValidationError("vector file: n out of range");
    if (doc.contains("N") && doc.at("N").get<std::uint64_t>() != (std::uint64_t{1} << n)) {
      throw ValidationError("vector file: N must equal 2^n");
    }
    auto z = doc.at("z").get<std::vector<std::uint64_t>>();
    std::vector<std::vector<std::uint64_t>> history;
    if (doc.contains("digit_history")) {
      history = doc.at("digit_history").get<std::vector<std::vector<std::uint64_t>>>();
    }
    return GeneratingVector(n, std::move(z), std::move(history));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("vector file: ") + e.what());
  }
}

GeneratingVector load_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open vector file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError("vector file '" + path + "' is not valid JSON: " + e.what());
  }
  return vector_from_json(doc);
}

json manifest_to_json(const RunManifest& manifest) {
  return {{"command", manifest.command},       {"config_digest", manifest.config_digest},
          {"inputs", manifest.inputs},         {"outputs", manifest.outputs},
          {"seed", manifest.seed},             {"tool_version", manifest.tool_version}};
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string hex_digest(std::uint64_t value) {
  char buffer[20];
  std::snprintf(buffer, sizeof buffer, "%016" PRIx64, value);
  return buffer;
}

json report_to_json(const BoundReport& report) {
  json out{{"theorem", report.name},
           {"lhs", report.lhs},
           {"rhs", report.rhs},
           {"satisfied", report.satisfied},
           {"n", report.context.n},
           {"s", report.context.s},
           {"scheme_digest", hex_digest(report.context.scheme_digest)},
           {"vector_digest", hex_digest(report.context.vector_digest)}};
  if (!report.annotation.empty()) out["annotation"] = report.annotation;
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write output file '" + path + "'");
  out << text;
}

}  // namespace cbcdbd::io
