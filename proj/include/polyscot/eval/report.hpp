// Copyright 2026 The polyscot Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyscot/core/text.hpp"
#include "polyscot/eval/metrics.hpp"
#include "polyscot/eval/protocol.hpp"

namespace polyscot::eval {

struct MetricsReport {
  std::string model = "candidate";
  std::string method = "CoT";
  std::map<LanguageId, LanguageScore> per_language;
  std::vector<LanguageId> skipped_languages;  // every task skipped
  double avg = 0.0;           // CoT-Pass@1
  double baseline_avg = 0.0;  // Pass@1
  double delta = 0.0;
};

inline MetricsReport make_report(const EvalRun& run, std::string model = "candidate", std::string method = "CoT") {
  MetricsReport r;
  r.model = std::move(model);
  r.method = std::move(method);
  std::map<LanguageId, double> p1, cot;
  for (auto& [l, s] : run.per_language()) {
    if (s.tasks == 0) {
      r.skipped_languages.push_back(l);
      continue;
    }
    r.per_language[l] = s;
    p1[l] = s.pass_at_1;
    cot[l] = s.cot_pass_at_1;
  }
  if (!p1.empty()) {
    r.baseline_avg = aggregate(p1).average;
    auto a = aggregate(cot, r.baseline_avg);
    r.avg = a.average;
    r.delta = *a.delta;
  }
  return r;
}

inline std::string pct(double v) { return text::fixed(v, 2); }

inline nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json per = nlohmann::json::object();
  for (auto& [l, s] : r.per_language)
    per[std::string(language_name(l))] = {{"pass_at_1", text::round_half_up(s.pass_at_1, 2)},
                                          {"cot_pass_at_1", text::round_half_up(s.cot_pass_at_1, 2)},
                                          {"tasks", s.tasks},
                                          {"skipped", s.skipped}};
  nlohmann::json skipped = nlohmann::json::array();
  for (auto l : r.skipped_languages) skipped.push_back(language_name(l));
  return {{"model", r.model},
          {"method", r.method},
          {"per_language", per},
          {"avg", text::round_half_up(r.avg, 2)},
          {"baseline_avg", text::round_half_up(r.baseline_avg, 2)},
          {"delta", text::round_half_up(r.delta, 2)},
          {"skipped_languages", skipped}};
}

inline std::string table_header() {
  std::string h = "model,method";
  for (auto l : kAllLanguages) h += "," + std::string(language_name(l));
  return h + ",avg,delta";
}

// Two rows in the published table's shape: Pass@1 as the baseline row and
// CoT-Pass@1 with its delta.
inline std::string to_csv(const MetricsReport& r) {
  auto row = [&](const std::string& method, bool cot, std::optional<double> delta) {
    std::string line = r.model + "," + method;
    for (auto l : kAllLanguages) {
      auto it = r.per_language.find(l);
      line += ",";
      if (it != r.per_language.end()) line += pct(cot ? it->second.cot_pass_at_1 : it->second.pass_at_1);
    }
    line += "," + pct(cot ? r.avg : r.baseline_avg) + ",";
    if (delta) line += (*delta >= 0 ? "+" : "") + pct(*delta);
    return line + "\n";
  };
  return table_header() + "\n" + row("Zero-Shot", false, std::nullopt) + row(r.method, true, r.delta);
}

// Human-readable row, e.g. "CSharp 42.50 | ... | Avg. 52.92 (+13.12)".
inline std::string table_row_text(const std::string& label, const std::map<LanguageId, double>& cells, double avg,
                                  std::optional<double> delta) {
  std::string s = label;
  for (auto l : kAllLanguages) {
    auto it = cells.find(l);
    s += " | " + std::string(language_name(l)) + " " + (it == cells.end() ? std::string("-") : pct(it->second));
  }
  s += " | Avg. " + pct(avg);
  if (delta) s += " (" + std::string(*delta >= 0 ? "+" : "") + pct(*delta) + ")";
  return s;
}

}  // namespace polyscot::eval
