#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace netreal {

using Json = nlohmann::json;

struct Stage {
  std::string name;
  bool pass = false;
  Json detail = Json::object();
};

/// Verdict list shared by every CLI command and demo. Serializes to
///   {"title": s, "stages": [{"name", "pass", "detail"}], "pass": b, "notes": [s]}
struct Report {
  std::string title;
  std::vector<Stage> stages;
  std::vector<std::string> notes;

  Stage& add(std::string name, bool pass, Json detail = Json::object()) {
    stages.push_back({std::move(name), pass, std::move(detail)});
    return stages.back();
  }

  [[nodiscard]] bool pass() const {
    for (const auto& s : stages) {
      if (!s.pass) return false;
    }
    return true;
  }

  [[nodiscard]] Json to_json() const {
    Json j;
    j["title"] = title;
    j["stages"] = Json::array();
    for (const auto& s : stages) j["stages"].push_back({{"name", s.name}, {"pass", s.pass}, {"detail", s.detail}});
    j["pass"] = pass();
    j["notes"] = notes;
    return j;
  }

  /// One line per stage, then notes. Carries the same verdicts as to_json.
  [[nodiscard]] std::string to_text() const {
    std::ostringstream os;
    if (!title.empty()) os << title << "\n";
    for (const auto& s : stages) os << (s.pass ? "[PASS] " : "[FAIL] ") << s.name << "\n";
    for (const auto& n : notes) os << "note: " << n << "\n";
    os << (pass() ? "RESULT: PASS" : "RESULT: FAIL") << "\n";
    return os.str();
  }
};

/// Structural validation against schemas/report.schema.json. Returns the
/// list of problems; empty means valid.
inline std::vector<std::string> validate_report_json(const Json& j) {
  std::vector<std::string> problems;
  if (!j.is_object()) return {"report is not an object"};
  for (const auto& [key, value] : j.items()) {
    if (key != "title" && key != "stages" && key != "pass" && key != "notes") {
      problems.push_back("unexpected member '" + key + "'");
    }
  }
  if (!j.contains("stages") || !j["stages"].is_array()) problems.emplace_back("'stages' missing or not an array");
  if (!j.contains("pass") || !j["pass"].is_boolean()) problems.emplace_back("'pass' missing or not a boolean");
  if (j.contains("title") && !j["title"].is_string()) problems.emplace_back("'title' is not a string");
  if (j.contains("notes")) {
    if (!j["notes"].is_array()) {
      problems.emplace_back("'notes' is not an array");
    } else {
      for (const auto& n : j["notes"]) {
        if (!n.is_string()) problems.emplace_back("'notes' entry is not a string");
      }
    }
  }
  if (!problems.empty()) return problems;
  bool all = true;
  for (std::size_t i = 0; i < j["stages"].size(); ++i) {
    const auto& s = j["stages"][i];
    const std::string at = "stages[" + std::to_string(i) + "]";
    if (!s.is_object()) {
      problems.push_back(at + " is not an object");
      continue;
    }
    for (const auto& [key, value] : s.items()) {
      if (key != "name" && key != "pass" && key != "detail") problems.push_back(at + " has unexpected member '" + key + "'");
    }
    if (!s.contains("name") || !s["name"].is_string() || s["name"].get<std::string>().empty()) {
      problems.push_back(at + ".name missing, empty or not a string");
    }
    if (!s.contains("pass") || !s["pass"].is_boolean()) {
      problems.push_back(at + ".pass missing or not a boolean");
    } else {
      all = all && s["pass"].get<bool>();
    }
    if (!s.contains("detail") || !s["detail"].is_object()) problems.push_back(at + ".detail missing or not an object");
  }
  if (problems.empty() && j["pass"].get<bool>() != all) problems.emplace_back("'pass' disagrees with stage verdicts");
  return problems;
}

}  // namespace netreal
