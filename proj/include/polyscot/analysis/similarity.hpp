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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "polyscot/core/hash.hpp"
#include "polyscot/core/language.hpp"
#include "polyscot/core/parallel.hpp"
#include "polyscot/core/text.hpp"
#include "polyscot/dataset/store.hpp"
#include "polyscot/scot/grammar.hpp"

namespace polyscot::analysis {

struct SimilarityWeights {
  double token = 0.5;
  double structure = 0.5;
};

struct SimilarityBreakdown {
  double token = 0.0;
  double structure = 0.0;
  double value = 0.0;
};

namespace detail {

inline void collect_text(const scot::NodeList& list, std::vector<std::string>& out) {
  for (const auto& n : list) {
    if (n.is_step()) {
      out.push_back(n.step().text);
    } else if (n.is_branch()) {
      out.push_back(n.branch().condition);
      collect_text(n.branch().then_body, out);
      collect_text(n.branch().else_body, out);
    } else {
      out.push_back(n.loop().header);
      collect_text(n.loop().body, out);
    }
  }
}

inline std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace detail

// Lowercased alphanumeric runs from the document's own text (Input/Output lines,
// steps, conditions, loop headers); numbering and the preamble are excluded.
inline std::map<std::string, std::size_t> token_counts(const scot::ScotDocument& d) {
  std::vector<std::string> parts{d.input_spec, d.output_spec};
  detail::collect_text(d.body, parts);
  std::map<std::string, std::size_t> counts;
  for (const auto& p : parts) {
    std::string cur;
    for (char c : p) {
      if (std::isalnum(static_cast<unsigned char>(c))) {
        cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      } else if (!cur.empty()) {
        ++counts[cur];
        cur.clear();
      }
    }
    if (!cur.empty()) ++counts[cur];
  }
  return counts;
}

inline double token_cosine(const scot::ScotDocument& a, const scot::ScotDocument& b) {
  auto ca = token_counts(a), cb = token_counts(b);
  if (ca.empty() && cb.empty()) return 1.0;
  double dot = 0, na = 0, nb = 0;
  for (auto& [t, n] : ca) {
    na += static_cast<double>(n * n);
    if (auto it = cb.find(t); it != cb.end()) dot += static_cast<double>(n * it->second);
  }
  for (auto& [t, n] : cb) nb += static_cast<double>(n * n);
  if (na == 0 || nb == 0) return 0.0;
  if (ca == cb) return 1.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

// 1 for equal fingerprints, else 1 - edit distance / longer length, over
// fingerprint tokens.
inline double structure_similarity(const scot::ScotDocument& a, const scot::ScotDocument& b) {
  auto fa = scot::fingerprint_tokens(a), fb = scot::fingerprint_tokens(b);
  if (fa == fb) return 1.0;
  std::size_t longest = std::max(fa.size(), fb.size());
  return 1.0 - static_cast<double>(detail::levenshtein(fa, fb)) / static_cast<double>(longest);
}

inline SimilarityBreakdown cot_similarity_breakdown(const scot::ScotDocument& a, const scot::ScotDocument& b,
                                                    const SimilarityWeights& w = {}) {
  double total = w.token + w.structure;
  if (w.token < 0 || w.structure < 0 || total <= 0) throw Error("similarity weights must be non-negative and not both zero");
  SimilarityBreakdown s;
  s.token = token_cosine(a, b);
  s.structure = structure_similarity(a, b);
  s.value = (w.token * s.token + w.structure * s.structure) / total;
  return s;
}

inline double cot_similarity(const scot::ScotDocument& a, const scot::ScotDocument& b, const SimilarityWeights& w = {}) {
  return cot_similarity_breakdown(a, b, w).value;
}

struct SimilarityMatrix {
  std::vector<LanguageId> labels;
  std::vector<std::vector<double>> cells;
};

class NoSharedTasks : public Error {
 public:
  NoSharedTasks(LanguageId a, LanguageId b)
      : Error("NoSharedTasks: " + std::string(language_name(a)) + " and " + std::string(language_name(b)) +
              " have no task in common") {}
};

// cell(i,j) = mean over shared task ids (sorted) of cot_similarity; the
// diagonal is 1 by definition.
inline SimilarityMatrix build_matrix(const std::vector<dataset::CotRecord>& records, std::vector<LanguageId> languages,
                                     const SimilarityWeights& w = {}, std::size_t workers = 1) {
  std::sort(languages.begin(), languages.end());
  languages.erase(std::unique(languages.begin(), languages.end()), languages.end());
  std::map<LanguageId, std::map<std::string, const scot::ScotDocument*>> by;
  for (auto l : languages) by[l];
  for (const auto& r : records) by[r.language][r.task_id] = &r.cot;
  std::size_t n = languages.size();
  SimilarityMatrix m{languages, std::vector<std::vector<double>>(n, std::vector<double>(n, 1.0))};
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), workers, [&](std::size_t p) {
    auto [i, j] = pairs[p];
    const auto& a = by.at(languages[i]);
    const auto& b = by.at(languages[j]);
    double sum = 0;
    std::size_t shared = 0;
    for (const auto& [task, doc] : a) {
      auto it = b.find(task);
      if (it == b.end()) continue;
      sum += cot_similarity(*doc, *it->second, w);
      ++shared;
    }
    if (shared == 0) throw NoSharedTasks(languages[i], languages[j]);
    m.cells[i][j] = m.cells[j][i] = sum / static_cast<double>(shared);
  });
  return m;
}

inline std::string heatmap_csv(const SimilarityMatrix& m) {
  std::string out = "language";
  for (auto l : m.labels) out += "," + std::string(language_name(l));
  out += "\n";
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    out += std::string(language_name(m.labels[i]));
    for (double v : m.cells[i]) out += "," + text::fixed(v, 4);
    out += "\n";
  }
  return out;
}

// Linear grayscale ramp: 0 -> #ffffff, 1 -> #000000.
inline std::string ramp_color(double v) {
  v = std::clamp(v, 0.0, 1.0);
  int level = static_cast<int>(std::lround(255.0 * (1.0 - v)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", level, level, level);
  return buf;
}

inline std::string heatmap_svg(const SimilarityMatrix& m) {
  const int cell = 48, left = 96, top = 96;
  int n = static_cast<int>(m.labels.size());
  int width = left + n * cell + 8, height = top + n * cell + 8;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
                  std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i < n; ++i) {
    std::string name(language_name(m.labels[static_cast<std::size_t>(i)]));
    int c = left + i * cell + cell / 2;
    s += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" + std::to_string(top + i * cell + cell / 2 + 4) +
         "\" text-anchor=\"end\">" + name + "</text>\n";
    s += "<text x=\"" + std::to_string(c) + "\" y=\"" + std::to_string(top - 6) + "\" text-anchor=\"start\" transform=\"rotate(-45 " +
         std::to_string(c) + " " + std::to_string(top - 6) + ")\">" + name + "</text>\n";
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = m.cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      int x = left + j * cell, y = top + i * cell;
      s += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" + std::to_string(cell) +
           "\" height=\"" + std::to_string(cell) + "\" fill=\"" + ramp_color(v) + "\"/>\n";
      s += "<text x=\"" + std::to_string(x + cell / 2) + "\" y=\"" + std::to_string(y + cell / 2 + 4) +
           "\" text-anchor=\"middle\" fill=\"" + (v > 0.5 ? "#ffffff" : "#000000") + "\">" + text::fixed(v, 2) +
           "</text>\n";
    }
  }
  return s + "</svg>\n";
}

enum class HeatmapFormat { Csv, Svg };

inline void emit_heatmap(const SimilarityMatrix& m, const std::filesystem::path& path, HeatmapFormat f) {
  write_file(path.string(), f == HeatmapFormat::Csv ? heatmap_csv(m) : heatmap_svg(m));
}

}  // namespace polyscot::analysis
