#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qberry/errors.hpp"

namespace qberry {

/// One evaluated computation: what went in, what came out, and the
/// conventions needed to read the numbers.
struct RunRecord {
  std::string command;
  std::map<std::string, double> inputs;
  std::map<std::string, double> outputs;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline void validate(const RunRecord& r) {
  if (r.outputs.empty()) throw InvalidInputError("record '" + r.command + "' has no outputs");
  for (const auto* m : {&r.inputs, &r.outputs}) {
    for (const auto& [k, v] : *m) {
      if (!std::isfinite(v)) {
        throw InvalidInputError("record '" + r.command + "': non-finite value for " + k);
      }
    }
  }
}

inline void to_json(nlohmann::json& j, const RunRecord& r) {
  j = nlohmann::json{{"command", r.command},
                     {"inputs", r.inputs},
                     {"outputs", r.outputs},
                     {"metadata", r.metadata}};
}

inline void from_json(const nlohmann::json& j, RunRecord& r) {
  j.at("command").get_to(r.command);
  j.at("inputs").get_to(r.inputs);
  j.at("outputs").get_to(r.outputs);
  j.at("metadata").get_to(r.metadata);
}

enum class OutputFormat { Csv, Json };

namespace detail {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

/// CSV: header of sorted input names then sorted output names (union over all
/// records; missing cells left empty), reals with 12 significant digits.
/// JSON: array of {command, inputs, outputs, metadata} objects.
inline std::string emit(const std::vector<RunRecord>& records, OutputFormat format) {
  for (const auto& r : records) validate(r);
  if (format == OutputFormat::Json) {
    return nlohmann::json(records).dump(2) + "\n";
  }
  if (records.empty()) return "";
  std::set<std::string> in_names;
  std::set<std::string> out_names;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.inputs) in_names.insert(k);
    for (const auto& [k, v] : r.outputs) out_names.insert(k);
  }
  std::string out;
  bool first = true;
  for (const auto* names : {&in_names, &out_names}) {
    for (const auto& n : *names) {
      if (!first) out += ',';
      out += detail::csv_escape(n);
      first = false;
    }
  }
  out += '\n';
  for (const auto& r : records) {
    first = true;
    for (const auto& [names, values] : {std::pair{&in_names, &r.inputs}, {&out_names, &r.outputs}}) {
      for (const auto& n : *names) {
        if (!first) out += ',';
        first = false;
        if (const auto it = values->find(n); it != values->end()) {
          out += detail::format_real(it->second);
        }
      }
    }
    out += '\n';
  }
  return out;
}

inline std::vector<RunRecord> parse_records_json(const std::string& text) {
  return nlohmann::json::parse(text).get<std::vector<RunRecord>>();
}

}  // namespace qberry
