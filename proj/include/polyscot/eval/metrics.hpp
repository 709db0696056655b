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

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyscot/core/error.hpp"
#include "polyscot/core/hash.hpp"
#include "polyscot/core/language.hpp"
#include "polyscot/core/text.hpp"
#include "polyscot/eval/sandbox.hpp"

namespace polyscot::eval {

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class MissingLanguage : public Error {
 public:
  explicit MissingLanguage(LanguageId l)
      : Error("MissingLanguage: parity mode needs all 12 languages; " + std::string(language_name(l)) + " is absent") {}
};

// 100 * #Pass / |results|. Skipped results must be filtered out beforehand.
inline double pass_at_1(const std::vector<RunResult>& results) {
  if (results.empty()) throw EmptyInput("EmptyInput: pass_at_1 over zero results");
  std::size_t pass = 0;
  for (const auto& r : results) pass += r.status == RunStatus::Pass;
  return 100.0 * static_cast<double>(pass) / static_cast<double>(results.size());
}

struct Aggregate {
  double average = 0.0;
  std::optional<double> delta;
};

// Arithmetic mean over languages; delta = average - baseline average.
inline Aggregate aggregate(const std::map<LanguageId, double>& per_language, std::optional<double> baseline_avg = {},
                           bool parity_mode = false) {
  if (parity_mode)
    for (LanguageId l : kAllLanguages)
      if (!per_language.count(l)) throw MissingLanguage(l);
  if (per_language.empty()) throw EmptyInput("EmptyInput: aggregate over zero languages");
  double sum = 0.0;
  for (auto [_, v] : per_language) sum += v;
  Aggregate a;
  a.average = sum / static_cast<double>(per_language.size());
  if (baseline_avg) a.delta = a.average - *baseline_avg;
  return a;
}

// ---- published-table arithmetic ----

// Percentages with two decimals, held as integer hundredths so the parity
// check is exact.
inline long long to_hundredths(std::string_view s) {
  std::string t(text::trim(s));
  bool neg = false;
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
    neg = t[0] == '-';
    t.erase(0, 1);
  }
  std::size_t dot = t.find('.');
  std::string whole = t.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : t.substr(dot + 1);
  if (whole.empty() || frac.size() > 2) throw Error("not a 2-decimal percentage: '" + std::string(s) + "'");
  while (frac.size() < 2) frac += '0';
  for (char c : whole + frac)
    if (c < '0' || c > '9') throw Error("not a 2-decimal percentage: '" + std::string(s) + "'");
  long long v = std::stoll(whole) * 100 + std::stoll(frac);
  return neg ? -v : v;
}

struct TableRow {
  std::string model;
  std::string method;
  std::map<LanguageId, long long> cells;  // hundredths
  long long avg = 0;
  std::optional<long long> delta;
};

// CSV: model,method,<12 languages>,avg,delta (delta empty for baselines).
inline std::vector<TableRow> parse_table_csv(std::string_view content) {
  auto lines = text::split_lines(content);
  if (lines.empty()) throw Error("empty table");
  std::vector<std::string> header;
  for (auto& c : text::split(lines[0], ',')) header.push_back(std::string(text::trim(c)));
  if (header.size() != 16 || header[0] != "model" || header[1] != "method" || header[14] != "avg" || header[15] != "delta")
    throw Error("table header must be model,method,<12 languages>,avg,delta");
  std::vector<LanguageId> cols;
  for (int i = 2; i < 14; ++i) cols.push_back(parse_language(header[static_cast<std::size_t>(i)]));
  std::vector<TableRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    auto cells = text::split(lines[i], ',');
    if (cells.size() != 16) throw Error("table line " + std::to_string(i + 1) + ": expected 16 fields");
    TableRow r;
    r.model = std::string(text::trim(cells[0]));
    r.method = std::string(text::trim(cells[1]));
    for (std::size_t c = 0; c < 12; ++c) r.cells[cols[c]] = to_hundredths(cells[c + 2]);
    r.avg = to_hundredths(cells[14]);
    if (!text::trim(cells[15]).empty()) r.delta = to_hundredths(cells[15]);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::string hundredths_str(long long h) {
  std::string sign = h < 0 ? "-" : "";
  long long a = std::llabs(h);
  std::string frac = std::to_string(a % 100);
  if (frac.size() < 2) frac = "0" + frac;
  return sign + std::to_string(a / 100) + "." + frac;
}

struct ParityCheck {
  std::string label;
  std::string published;
  std::string recomputed;
  bool ok = false;
};

// Each row's average against the mean of its cells (|mean - avg| <= 0.005,
// checked as |sum - n*avg| <= n/2 hundredths), and each delta against
// avg - baseline avg, where the baseline is the first delta-less row of the
// same model.
inline std::vector<ParityCheck> table_parity(const std::vector<TableRow>& rows) {
  std::vector<ParityCheck> out;
  std::map<std::string, long long> baseline;
  for (const auto& r : rows) {
    long long sum = 0;
    for (auto [_, v] : r.cells) sum += v;
    long long n = static_cast<long long>(r.cells.size());
    bool ok = 2 * std::llabs(sum - n * r.avg) <= n;
    out.push_back({r.model + " / " + r.method + " avg", hundredths_str(r.avg),
                   text::fixed(static_cast<double>(sum) / static_cast<double>(n) / 100.0, 4), ok});
    if (!r.delta) {
      baseline.emplace(r.model, r.avg);
      continue;
    }
    auto b = baseline.find(r.model);
    if (b == baseline.end()) {
      out.push_back({r.model + " / " + r.method + " delta", hundredths_str(*r.delta), "no baseline row", false});
      continue;
    }
    long long diff = r.avg - b->second;
    out.push_back({r.model + " / " + r.method + " delta", hundredths_str(*r.delta), hundredths_str(diff),
                   2 * std::llabs(diff - *r.delta) <= 1});
  }
  return out;
}

}  // namespace polyscot::eval
