#pragma once

#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

namespace subsig {

using json = nlohmann::json;

constexpr int kReportSchema = 1;

struct TrialResult {
  int index = 0;
  bool pass = false;
  double max_err = 0.0;
  std::string note;  // optional worked-value or shape tag
};

struct SuiteReport {
  std::string suite;
  std::string mode;
  uint64_t seed = 0;
  json params = json::object();
  std::vector<TrialResult> trials;
  double max_err = 0.0;
  bool pass = true;
  double wall_ms = 0.0;  // reported on demand only: timings are not reproducible

  void add(TrialResult t) {
    pass = pass && t.pass;
    max_err = std::max(max_err, t.max_err);
    trials.push_back(std::move(t));
  }

  json to_json(bool with_timings = false) const {
    json tr = json::array();
    int failures = 0;
    for (const auto& t : trials) {
      json e{{"i", t.index}, {"pass", t.pass}, {"max_err", t.max_err}};
      if (!t.note.empty()) e["note"] = t.note;
      tr.push_back(std::move(e));
      if (!t.pass) ++failures;
    }
    json out{{"schema", kReportSchema},
             {"suite", suite},
             {"mode", mode},
             {"seed", seed},
             {"params", params},
             {"trials", tr},
             {"summary",
              {{"trials", int(trials.size())}, {"failures", failures}, {"max_err", max_err}}},
             {"pass", pass}};
    if (with_timings) out["wall_ms"] = wall_ms;
    return out;
  }
};

inline void write_json_file(const json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << j.dump(2) << "\n";
}

inline void write_csv_file(const std::vector<std::string>& lines, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  for (const auto& l : lines) os << l << "\n";
}

}  // namespace subsig
