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
#include <string_view>
#include <vector>

#include <json.hpp>

#include "polyscot/core/text.hpp"
#include "polyscot/scot/document.hpp"

namespace polyscot::scot {

namespace detail {

inline std::string_view strip_period(std::string_view s) {
  s = text::trim(s);
  if (!s.empty() && s.back() == '.') s.remove_suffix(1);
  return text::rtrim(s);
}

inline bool is_preamble(std::string_view line) {
  std::string l(strip_period(line));
  // Typographic apostrophe (U+2019) is common in model output.
  std::size_t curly = l.find("\xE2\x80\x99");
  if (curly != std::string::npos) l.replace(curly, 3, "'");
  return text::iequals(l, strip_period(kPreamble));
}

// "Input: x" -> "x" when the label matches (case-insensitive).
inline bool labeled(std::string_view line, std::string_view label, std::string& out) {
  line = text::trim(line);
  if (!text::istarts_with(line, label)) return false;
  std::string_view rest = line.substr(label.size());
  if (rest.empty() || rest[0] != ':') return false;
  out = std::string(text::trim(rest.substr(1)));
  return true;
}

// Leading "12." or "12)" numbering.
inline std::string_view strip_number(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) return text::trim(s.substr(i + 1));
  return s;
}

enum class LineKind { Step, If, Elif, Else, Loop };

inline bool first_word_is(std::string_view s, std::initializer_list<std::string_view> words) {
  for (auto w : words)
    if (text::starts_with_word(text::to_lower(s), w)) return true;
  return false;
}

inline LineKind classify(std::string_view t) {
  if (t.empty() || t.back() != ':') return LineKind::Step;
  std::string_view head = text::rtrim(t.substr(0, t.size() - 1));
  std::string low = text::to_lower(head);
  if (low == "else") return LineKind::Else;
  if (text::starts_with_word(low, "elif")) return LineKind::Elif;
  if (low.rfind("else if", 0) == 0 && text::starts_with_word(std::string_view(low).substr(5), "if"))
    return LineKind::Elif;
  if (text::starts_with_word(low, "if")) return LineKind::If;
  if (text::starts_with_word(low, "for") || text::starts_with_word(low, "while")) return LineKind::Loop;
  return LineKind::Step;
}

inline std::string without_colon(std::string_view t) {
  return std::string(text::rtrim(t.substr(0, t.size() - 1)));
}

struct Frame {
  NodeList* list;
  std::size_t depth;
  std::size_t opener_line;  // 0 for the root
  Branch* else_target = nullptr;
};

}  // namespace detail

// Parses the SCoT surface grammar. Blank lines and trailing whitespace are
// ignored; numbering is discarded.
inline ScotDocument parse_scot(std::string_view src) {
  using namespace detail;
  auto lines = text::split_lines(src);
  std::size_t i = 0;
  auto skip_blank = [&] {
    while (i < lines.size() && text::trim(lines[i]).empty()) ++i;
  };
  skip_blank();
  if (i == lines.size() || !is_preamble(lines[i]))
    throw ScotError(ScotErrorKind::MissingPreamble, i < lines.size() ? i + 1 : 1,
                    "expected \"" + std::string(kPreamble) + "\"");
  ++i;
  ScotDocument doc;
  skip_blank();
  if (i == lines.size() || !labeled(lines[i], "Input", doc.input_spec) || doc.input_spec.empty())
    throw ScotError(ScotErrorKind::MissingIOSpec, i < lines.size() ? i + 1 : lines.size(), "expected \"Input: ...\"");
  ++i;
  skip_blank();
  if (i == lines.size() || !labeled(lines[i], "Output", doc.output_spec) || doc.output_spec.empty())
    throw ScotError(ScotErrorKind::MissingIOSpec, i < lines.size() ? i + 1 : lines.size(), "expected \"Output: ...\"");
  ++i;

  std::vector<Frame> stack{{&doc.body, 0, 0}};
  bool needs_child = false;
  for (; i < lines.size(); ++i) {
    const std::string& raw = lines[i];
    if (text::trim(raw).empty()) continue;
    std::size_t lineno = i + 1;
    std::size_t col = 0, k = 0;
    while (k < raw.size() && (raw[k] == ' ' || raw[k] == '\t')) {
      col += raw[k] == '\t' ? 4 - col % 4 : 1;
      ++k;
    }
    if (col % 4 != 0)
      throw ScotError(ScotErrorKind::IndentationError, lineno, "indent of " + std::to_string(col) + " columns is not a multiple of 4");
    std::size_t depth = col / 4;
    Frame& top = stack.back();
    if (needs_child) {
      if (depth < top.depth)
        throw ScotError(ScotErrorKind::EmptyBody, top.opener_line, "block has no steps");
      if (depth > top.depth)
        throw ScotError(ScotErrorKind::IndentationError, lineno, "indented more than one level");
      needs_child = false;
    }
    if (depth > stack.back().depth)
      throw ScotError(ScotErrorKind::IndentationError, lineno, "unexpected indent");
    while (stack.back().depth > depth) stack.pop_back();
    Frame& cur = stack.back();

    std::string t(strip_number(text::trim(raw)));
    if (t.empty()) throw ScotError(ScotErrorKind::EmptyBody, lineno, "empty step");
    LineKind kind = classify(t);
    if (kind == LineKind::Else || kind == LineKind::Elif) {
      Branch* target = cur.else_target;
      if (!target || !target->else_body.empty())
        throw ScotError(ScotErrorKind::IndentationError, lineno, "'else' without a matching 'if' at this depth");
      cur.else_target = nullptr;
      if (kind == LineKind::Else) {
        stack.push_back({&target->else_body, depth + 1, lineno});
      } else {
        std::string cond = without_colon(t);
        // "elif c" / "else if c" -> nested "if c" in the else arm.
        std::string_view rest = text::istarts_with(cond, "elif") ? std::string_view(cond).substr(4)
                                                                 : std::string_view(cond).substr(7);
        target->else_body.push_back(Branch{"if " + std::string(text::trim(rest)), {}, {}});
        Branch& nested = target->else_body.back().branch();
        cur.else_target = &nested;
        stack.push_back({&nested.then_body, depth + 1, lineno});
      }
      needs_child = true;
      continue;
    }
    cur.else_target = nullptr;
    switch (kind) {
      case LineKind::Step: cur.list->push_back(Step{t}); break;
      case LineKind::If: {
        cur.list->push_back(Branch{without_colon(t), {}, {}});
        Branch& b = cur.list->back().branch();
        cur.else_target = &b;
        stack.push_back({&b.then_body, depth + 1, lineno});
        needs_child = true;
        break;
      }
      case LineKind::Loop: {
        cur.list->push_back(Loop{without_colon(t), {}});
        stack.push_back({&cur.list->back().loop().body, depth + 1, lineno});
        needs_child = true;
        break;
      }
      default: break;
    }
  }
  if (needs_child) throw ScotError(ScotErrorKind::EmptyBody, stack.back().opener_line, "block has no steps");
  if (doc.body.empty()) throw ScotError(ScotErrorKind::EmptyBody, lines.size(), "document has no steps");
  return doc;
}

struct Violation {
  ScotErrorKind kind;
  std::string path;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

namespace detail {

inline bool single_line(std::string_view s) { return s.find('\n') == std::string_view::npos; }

inline void validate_list(const NodeList& list, const std::string& path, ValidationReport& out);

inline void validate_node(const ScotNode& n, const std::string& path, ValidationReport& out) {
  auto bad = [&](ScotErrorKind k, std::string msg) { out.push_back({k, path, std::move(msg)}); };
  if (n.is_step()) {
    const auto& t = n.step().text;
    if (text::trim(t).empty()) bad(ScotErrorKind::EmptyBody, "step text is empty");
    else if (!single_line(t)) bad(ScotErrorKind::InvalidDocument, "step text spans lines");
    else if (text::trim(t) != t) bad(ScotErrorKind::InvalidDocument, "step text has surrounding whitespace");
    else if (classify(t) != LineKind::Step) bad(ScotErrorKind::InvalidDocument, "step text reads as a block opener");
  } else if (n.is_branch()) {
    const auto& b = n.branch();
    if (!single_line(b.condition) || classify(b.condition + ":") != LineKind::If)
      bad(ScotErrorKind::InvalidDocument, "branch condition must be one line starting with 'if'");
    if (b.then_body.empty()) bad(ScotErrorKind::EmptyBody, "branch has an empty then-body");
    validate_list(b.then_body, path + ".then", out);
    validate_list(b.else_body, path + ".else", out);
  } else {
    const auto& l = n.loop();
    if (!single_line(l.header) || classify(l.header + ":") != LineKind::Loop)
      bad(ScotErrorKind::InvalidDocument, "loop header must be one line starting with 'for' or 'while'");
    if (l.body.empty()) bad(ScotErrorKind::EmptyBody, "loop has an empty body");
    validate_list(l.body, path + ".body", out);
  }
}

inline void validate_list(const NodeList& list, const std::string& path, ValidationReport& out) {
  for (std::size_t i = 0; i < list.size(); ++i)
    validate_node(list[i], path + "[" + std::to_string(i) + "]", out);
}

}  // namespace detail

// Every invariant violation, in document order. Never throws.
inline ValidationReport validate(const ScotDocument& doc) {
  ValidationReport out;
  for (auto [label, value] : {std::pair{"input", &doc.input_spec}, std::pair{"output", &doc.output_spec}}) {
    if (text::trim(*value).empty())
      out.push_back({ScotErrorKind::MissingIOSpec, label, std::string(label) + " spec is empty"});
    else if (!detail::single_line(*value))
      out.push_back({ScotErrorKind::InvalidDocument, label, std::string(label) + " spec spans lines"});
  }
  if (doc.body.empty()) out.push_back({ScotErrorKind::EmptyBody, "body", "document has no steps"});
  detail::validate_list(doc.body, "body", out);
  return out;
}

namespace detail {

inline void render_list(const NodeList& list, std::size_t depth, std::size_t& counter, std::string& out) {
  std::string pad(depth * 4, ' ');
  auto line = [&](const std::string& t) { out += pad + std::to_string(++counter) + ". " + t + "\n"; };
  for (const auto& n : list) {
    if (n.is_step()) {
      line(n.step().text);
    } else if (n.is_branch()) {
      line(n.branch().condition + ":");
      render_list(n.branch().then_body, depth + 1, counter, out);
      if (!n.branch().else_body.empty()) {
        line("else:");
        render_list(n.branch().else_body, depth + 1, counter, out);
      }
    } else {
      line(n.loop().header + ":");
      render_list(n.loop().body, depth + 1, counter, out);
    }
  }
}

}  // namespace detail

inline std::string render_scot(const ScotDocument& doc) {
  if (auto report = validate(doc); !report.empty())
    throw ScotError(ScotErrorKind::InvalidDocument, 0, report.front().path + ": " + report.front().message);
  std::string out = std::string(kPreamble) + "\nInput: " + doc.input_spec + "\nOutput: " + doc.output_spec + "\n";
  std::size_t counter = 0;
  detail::render_list(doc.body, 0, counter, out);
  return out;
}

namespace detail {

inline void fingerprint_list(const NodeList& list, std::vector<std::string>& toks) {
  for (const auto& n : list) {
    if (n.is_step()) {
      toks.emplace_back("S");
    } else if (n.is_branch()) {
      toks.emplace_back("B(");
      fingerprint_list(n.branch().then_body, toks);
      if (n.branch().else_body.empty()) {
        toks.emplace_back(")");
      } else {
        toks.emplace_back(")(");
        fingerprint_list(n.branch().else_body, toks);
        toks.emplace_back(")");
      }
    } else {
      toks.emplace_back("L(");
      fingerprint_list(n.loop().body, toks);
      toks.emplace_back(")");
    }
  }
}

}  // namespace detail

// Space-separated tokens over {S, L( ), B( ), B( )( )}.
inline std::vector<std::string> fingerprint_tokens(const ScotDocument& doc) {
  std::vector<std::string> toks;
  detail::fingerprint_list(doc.body, toks);
  return toks;
}

inline std::string structure_fingerprint(const ScotDocument& doc) {
  return text::join(fingerprint_tokens(doc), " ");
}

// ---- JSON ----

using nlohmann::json;

inline json to_json(const NodeList& list);

inline json to_json(const ScotNode& n) {
  if (n.is_step()) return {{"kind", "step"}, {"text", n.step().text}};
  if (n.is_branch())
    return {{"kind", "branch"},
            {"condition", n.branch().condition},
            {"then", to_json(n.branch().then_body)},
            {"else", to_json(n.branch().else_body)}};
  return {{"kind", "loop"}, {"header", n.loop().header}, {"body", to_json(n.loop().body)}};
}

inline json to_json(const NodeList& list) {
  json a = json::array();
  for (const auto& n : list) a.push_back(to_json(n));
  return a;
}

inline json to_json(const ScotDocument& doc) {
  return {{"input", doc.input_spec}, {"output", doc.output_spec}, {"body", to_json(doc.body)}};
}

inline NodeList nodes_from_json(const json& a);

inline ScotNode node_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "step") return Step{j.at("text").get<std::string>()};
  if (kind == "branch")
    return Branch{j.at("condition").get<std::string>(), nodes_from_json(j.at("then")),
                  nodes_from_json(j.value("else", json::array()))};
  if (kind == "loop") return Loop{j.at("header").get<std::string>(), nodes_from_json(j.at("body"))};
  throw ScotError(ScotErrorKind::InvalidDocument, 0, "unknown node kind '" + kind + "'");
}

inline NodeList nodes_from_json(const json& a) {
  NodeList out;
  for (const auto& j : a) out.push_back(node_from_json(j));
  return out;
}

inline ScotDocument document_from_json(const json& j) {
  return ScotDocument{j.at("input").get<std::string>(), j.at("output").get<std::string>(),
                      nodes_from_json(j.at("body"))};
}

}  // namespace polyscot::scot
