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
#include <string>
#include <vector>

#include <json.hpp>

#include "polyscot/agents/agents.hpp"
#include "polyscot/core/hash.hpp"
#include "polyscot/core/text.hpp"

namespace polyscot::dataset {

using agents::SeedSample;
using nlohmann::json;

struct SchemaProblem {
  std::size_t line;
  std::string field;
  std::string message;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<SchemaProblem> problems)
      : Error(describe(problems)), problems_(std::move(problems)) {}
  const std::vector<SchemaProblem>& problems() const noexcept { return problems_; }

 private:
  static std::string describe(const std::vector<SchemaProblem>& ps) {
    std::string s = "SchemaError:";
    for (const auto& p : ps) s += " line " + std::to_string(p.line) + " field '" + p.field + "': " + p.message + ";";
    s.pop_back();
    return s;
  }
  std::vector<SchemaProblem> problems_;
};

struct DuplicateTaskId {
  std::size_t line;
  std::string task_id;
  std::size_t first_line;
};

struct SeedCorpus {
  std::vector<SeedSample> samples;
  std::vector<DuplicateTaskId> warnings;
  std::string sha256;
  std::size_t lines = 0;
};

// Parses seed JSON Lines. Every bad line is reported together; duplicate
// task ids keep the first occurrence and are returned as warnings.
inline SeedCorpus parse_seed_jsonl(std::string_view content) {
  SeedCorpus out;
  out.sha256 = sha256_hex(content);
  std::vector<SchemaProblem> problems;
  std::map<std::string, std::size_t> seen;
  auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t lineno = i + 1;
    if (text::trim(lines[i]).empty()) continue;
    ++out.lines;
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      problems.push_back({lineno, "", std::string("invalid JSON: ") + e.what()});
      continue;
    }
    if (!j.is_object()) {
      problems.push_back({lineno, "", "expected a JSON object"});
      continue;
    }
    SeedSample s;
    bool ok = true;
    auto field = [&](const char* name, std::string& dst, bool non_empty) {
      if (!j.contains(name)) {
        problems.push_back({lineno, name, "missing"});
        ok = false;
      } else if (!j[name].is_string()) {
        problems.push_back({lineno, name, "must be a string"});
        ok = false;
      } else {
        dst = j[name].get<std::string>();
        if (non_empty && text::trim(dst).empty()) {
          problems.push_back({lineno, name, "must be non-empty"});
          ok = false;
        }
      }
    };
    std::string lang;
    field("task_id", s.task_id, true);
    field("language", lang, true);
    field("docstring", s.docstring, true);
    field("signature", s.signature, true);
    field("solution", s.solution, false);
    field("tests", s.tests, false);
    if (!lang.empty()) {
      if (auto l = try_parse_language(lang)) s.language = *l;
      else {
        problems.push_back({lineno, "language", "unknown language '" + lang + "'"});
        ok = false;
      }
    }
    if (!ok) continue;
    if (auto it = seen.find(s.task_id); it != seen.end()) {
      out.warnings.push_back({lineno, s.task_id, it->second});
      continue;
    }
    seen.emplace(s.task_id, lineno);
    out.samples.push_back(std::move(s));
  }
  if (!problems.empty()) throw SchemaError(std::move(problems));
  return out;
}

inline SeedCorpus ingest_seed(const std::string& path) { return parse_seed_jsonl(read_file(path)); }

}  // namespace polyscot::dataset
