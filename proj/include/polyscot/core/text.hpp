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
#include <string>
#include <string_view>
#include <vector>

namespace polyscot::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::string_view ltrim(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  return s.substr(i);
}

inline std::string_view rtrim(std::string_view s) {
  std::size_t n = s.size();
  while (n > 0 && is_space(s[n - 1])) --n;
  return s.substr(0, n);
}

inline std::string_view trim(std::string_view s) { return rtrim(ltrim(s)); }

// Collapses every whitespace run to one space and trims both ends.
inline std::string collapse_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

// Splits on '\n'; a trailing '\r' on each line is dropped. An input ending
// in '\n' does not produce a trailing empty line.
inline std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < s.size()) {
        std::string_view line = s.substr(start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
      }
      break;
    }
    std::string_view line = s.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = nl + 1;
  }
  return lines;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t at = s.find(sep, start);
    out.emplace_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

inline bool istarts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && iequals(s.substr(0, prefix.size()), prefix);
}

// True when `s` starts with `word` followed by a non-identifier character
// (or the end of the string), compared case-insensitively.
inline bool starts_with_word(std::string_view s, std::string_view word) {
  if (!istarts_with(s, word)) return false;
  return s.size() == word.size() || !is_ident_char(s[word.size()]);
}

// Whole-word, case-insensitive containment.
inline bool contains_word(std::string_view haystack, std::string_view word) {
  std::string h = to_lower(haystack);
  std::string w = to_lower(word);
  std::size_t pos = 0;
  while ((pos = h.find(w, pos)) != std::string::npos) {
    bool left_ok = pos == 0 || !is_ident_char(h[pos - 1]);
    std::size_t end = pos + w.size();
    bool right_ok = end >= h.size() || !is_ident_char(h[end]);
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), is_ident_char);
}

inline std::string indent_lines(std::string_view block, std::string_view prefix) {
  std::string out;
  auto lines = split_lines(block);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    if (!lines[i].empty()) out.append(prefix);
    out.append(lines[i]);
  }
  return out;
}

// Removes the longest common leading-whitespace prefix of non-blank lines
// and right-trims each line.
inline std::vector<std::string> dedent(const std::vector<std::string>& lines) {
  std::size_t common = std::string::npos;
  for (const auto& l : lines) {
    if (trim(l).empty()) continue;
    std::size_t n = 0;
    while (n < l.size() && (l[n] == ' ' || l[n] == '\t')) ++n;
    common = std::min(common, n);
  }
  if (common == std::string::npos) common = 0;
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (const auto& l : lines) {
    std::string_view v = rtrim(l);
    out.emplace_back(v.size() >= common ? v.substr(common) : std::string_view{});
  }
  return out;
}

inline void strip_blank_edges(std::vector<std::string>& lines) {
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  lines.erase(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(first));
}

// Formats with exactly `decimals` digits after the point, rounding half away
// from zero on the decimal value closest to `x`.
inline std::string fixed(double x, int decimals) {
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) scale *= 10.0;
  // Nudge by a relative epsilon so values like 2.675 (stored as 2.67499...)
  // round the way their decimal spelling suggests.
  double scaled = x * scale;
  double eps = 1e-9 * std::max(1.0, scaled < 0 ? -scaled : scaled);
  double rounded = scaled < 0 ? -std::floor(-scaled + 0.5 + eps) : std::floor(scaled + 0.5 + eps);
  long long whole = static_cast<long long>(rounded);
  bool neg = whole < 0;
  unsigned long long mag = static_cast<unsigned long long>(neg ? -whole : whole);
  unsigned long long ip = mag / static_cast<unsigned long long>(scale);
  unsigned long long fp = mag % static_cast<unsigned long long>(scale);
  std::string frac = std::to_string(fp);
  while (static_cast<int>(frac.size()) < decimals) frac.insert(frac.begin(), '0');
  std::string out = (neg && mag != 0 ? "-" : "") + std::to_string(ip);
  if (decimals > 0) out += "." + frac;
  return out;
}

// Half-up rounding to `decimals` places, returned as the double nearest the
// rounded decimal.
inline double round_half_up(double x, int decimals) { return std::stod(fixed(x, decimals)); }

}  // namespace polyscot::text
