#include "asympair/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "asympair/format.hpp"

namespace asympair {

Json json_number(double value) {
  if (std::isfinite(value)) return value;
  return format_number(value);
}

double number_from_json(const Json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number, got " + value.dump());
}

Json to_json(const Verdict& verdict) {
  return Json{{"test", verdict.test},
              {"outcome", to_string(verdict.outcome)},
              {"statistic", json_number(verdict.statistic)},
              {"margin", json_number(verdict.margin)},
              {"window", Json::array({verdict.window_start, verdict.window_end})},
              {"certified", verdict.certified},
              {"rule", verdict.rule},
              {"note", verdict.note}};
}

Verdict verdict_from_json(const Json& value) {
  Verdict v;
  v.test = value.at("test").get<std::string>();
  v.outcome = parse_outcome(value.at("outcome").get<std::string>());
  v.statistic = number_from_json(value.at("statistic"));
  v.margin = number_from_json(value.at("margin"));
  const Json& window = value.at("window");
  if (!window.is_array() || window.size() != 2) throw std::invalid_argument("window must be [start, end]");
  v.window_start = window[0].get<Index>();
  v.window_end = window[1].get<Index>();
  v.certified = value.at("certified").get<bool>();
  v.rule = value.value("rule", "");
  v.note = value.value("note", "");
  return v;
}

Json to_json(const Report& report) {
  Json items = Json::array();
  for (const auto& item : report.items) {
    Json verdicts = Json::array();
    for (const auto& v : item.verdicts) verdicts.push_back(to_json(v));
    items.push_back(Json{{"label", item.label}, {"verdicts", verdicts}, {"metrics", item.metrics}});
  }
  Json out{{"version", report.version},   {"command", report.command}, {"config", report.config},
           {"items", items},              {"wall_ms", report.wall_ms}, {"exit_code", report.exit_code}};
  if (!report.error.empty()) out["error"] = report.error;
  return out;
}

Report report_from_json(const Json& value) {
  Report r;
  r.version = value.at("version").get<std::string>();
  r.command = value.at("command").get<std::string>();
  r.config = value.at("config");
  if (!r.config.is_object()) throw std::invalid_argument("config must be an object");
  for (const auto& item : value.at("items")) {
    ReportItem parsed;
    parsed.label = item.at("label").get<std::string>();
    for (const auto& v : item.at("verdicts")) parsed.verdicts.push_back(verdict_from_json(v));
    parsed.metrics = item.at("metrics");
    r.items.push_back(std::move(parsed));
  }
  r.wall_ms = value.at("wall_ms").get<double>();
  r.exit_code = value.at("exit_code").get<int>();
  r.error = value.value("error", "");
  return r;
}

std::string serialize(const Report& report, bool include_wall_time) {
  Json j = to_json(report);
  if (!include_wall_time) j.erase("wall_ms");
  return j.dump(2) + "\n";
}

namespace {

std::string scalar_text(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return format_number(value.get<double>());
  return value.dump();
}

}  // namespace

std::string verdict_line(const Verdict& v) {
  std::ostringstream out;
  out << v.test << ": " << to_string(v.outcome) << " statistic=" << format_number(v.statistic)
      << " margin=" << format_number(v.margin) << " window=[" << v.window_start << "," << v.window_end << "]"
      << " certified=" << (v.certified ? "yes" : "no");
  if (!v.rule.empty()) out << " rule=" << v.rule;
  return out.str();
}

std::string render_human(const Report& report) {
  std::ostringstream out;
  out << "asympair " << report.version << " " << report.command << "\n";
  out << "config:";
  for (const auto& [key, value] : report.config.items()) {
    if (value.is_null()) continue;
    out << " " << key << "=" << scalar_text(value);
  }
  out << "\n";
  for (std::size_t i = 0; i < report.items.size(); ++i) {
    const auto& item = report.items[i];
    out << "[" << i + 1 << "] " << item.label << "\n";
    for (const auto& v : item.verdicts) {
      out << "  " << verdict_line(v) << "\n";
      if (!v.note.empty()) out << "      " << v.note << "\n";
    }
    for (const auto& [key, value] : item.metrics.items()) out << "  " << key << " = " << scalar_text(value) << "\n";
  }
  if (!report.error.empty()) out << "error: " << report.error << "\n";
  out << "exit " << report.exit_code << "\n";
  return out.str();
}

}  // namespace asympair
