#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "asympair/verdict.hpp"

namespace asympair {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

struct ReportItem {
  std::string label;
  std::vector<Verdict> verdicts;
  /// Free-form numbers, flags and strings. Non-finite numbers are stored as
  /// the strings "inf", "-inf".
  Json metrics = Json::object();
};

struct Report {
  std::string version = kVersion;
  std::string command;
  /// Every option with its resolved value, defaults included.
  Json config = Json::object();
  std::vector<ReportItem> items;
  double wall_ms = 0.0;
  int exit_code = 0;
  /// Set when the command stopped on an error.
  std::string error;
};

/// A JSON number, or "inf"/"-inf"/"nan" when the value is not finite.
Json json_number(double value);
/// Inverse of json_number. Throws std::invalid_argument on other strings.
double number_from_json(const Json& value);

Json to_json(const Verdict& verdict);
Verdict verdict_from_json(const Json& value);
Json to_json(const Report& report);
/// Throws std::invalid_argument (or a nlohmann exception) on a malformed report.
Report report_from_json(const Json& value);

/// Keys sorted, two-space indent, trailing newline. Without wall time the
/// output of a deterministic run is byte-identical across runs.
std::string serialize(const Report& report, bool include_wall_time = true);
std::string render_human(const Report& report);

/// One line per verdict, as printed by render_human.
std::string verdict_line(const Verdict& verdict);

}  // namespace asympair
