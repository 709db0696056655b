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

#include <string>
#include <vector>

#include "polyscot/core/error.hpp"
#include "polyscot/core/hash.hpp"
#include "polyscot/core/text.hpp"

namespace polyscot::analysis {

inline constexpr int kRubricMin = 1;
inline constexpr int kRubricMax = 5;

struct RubricScore {
  std::string rater;
  std::string task_id;
  std::string system;
  int similarity = 0;
  int naturalness = 0;
  int educational_value = 0;
};

struct RubricMeans {
  std::size_t rows = 0;
  double similarity = 0;
  double naturalness = 0;
  double educational_value = 0;
};

class RubricSchemaError : public Error {
 public:
  using Error::Error;
};

class RubricEmpty : public Error {
 public:
  explicit RubricEmpty(const std::string& system) : Error("EmptyInput: no rubric rows for system '" + system + "'") {}
};

inline std::vector<RubricScore> parse_rubric_csv(std::string_view content) {
  auto lines = text::split_lines(content);
  if (lines.empty() || text::trim(lines[0]) != "rater,task_id,system,similarity,naturalness,educational_value")
    throw RubricSchemaError("rubric header must be rater,task_id,system,similarity,naturalness,educational_value");
  std::vector<RubricScore> out;
  std::vector<std::string> problems;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    auto f = text::split(lines[i], ',');
    std::string where = "line " + std::to_string(i + 1);
    if (f.size() != 6) {
      problems.push_back(where + ": expected 6 fields");
      continue;
    }
    RubricScore s{std::string(text::trim(f[0])), std::string(text::trim(f[1])), std::string(text::trim(f[2]))};
    bool ok = true;
    auto score = [&](const std::string& raw, const char* name, int& dst) {
      std::string t(text::trim(raw));
      if (t.size() != 1 || t[0] < '0' + kRubricMin || t[0] > '0' + kRubricMax) {
        problems.push_back(where + ": " + name + " must be an integer in 1..5, got '" + t + "'");
        ok = false;
        return;
      }
      dst = t[0] - '0';
    };
    score(f[3], "similarity", s.similarity);
    score(f[4], "naturalness", s.naturalness);
    score(f[5], "educational_value", s.educational_value);
    if (ok) out.push_back(std::move(s));
  }
  if (!problems.empty()) throw RubricSchemaError("rubric: " + text::join(problems, "; "));
  return out;
}

// Per-aspect means for one system (unrounded; present with text::fixed(v, 2)).
inline RubricMeans aggregate_rubric(const std::vector<RubricScore>& scores, const std::string& system) {
  long long sim = 0, nat = 0, edu = 0;
  RubricMeans m;
  for (const auto& s : scores) {
    if (s.system != system) continue;
    ++m.rows;
    sim += s.similarity;
    nat += s.naturalness;
    edu += s.educational_value;
  }
  if (m.rows == 0) throw RubricEmpty(system);
  double n = static_cast<double>(m.rows);
  m.similarity = static_cast<double>(sim) / n;
  m.naturalness = static_cast<double>(nat) / n;
  m.educational_value = static_cast<double>(edu) / n;
  return m;
}

}  // namespace polyscot::analysis
