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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyscot/agents/backend.hpp"
#include "polyscot/core/language.hpp"
#include "polyscot/core/text.hpp"
#include "polyscot/scot/grammar.hpp"
#include "polyscot/sig/header.hpp"

namespace polyscot::agents {

namespace mock {

// Summary split into sentences at '.', '?' or '!' followed by whitespace or
// the end. The persona line is not part of the task description.
inline std::vector<std::string> sentences(const sig::DocstringIR& doc) {
  std::vector<std::string> lines;
  for (const auto& l : doc.summary)
    if (!sig::detail::is_persona_line(l)) lines.push_back(l);
  std::string all = text::collapse_ws(text::join(lines, " "));
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < all.size(); ++i) {
    cur += all[i];
    bool end = all[i] == '.' || all[i] == '?' || all[i] == '!';
    if (end && (i + 1 == all.size() || all[i + 1] == ' ')) {
      std::string t(text::trim(cur));
      if (!t.empty()) out.push_back(t);
      cur.clear();
    }
  }
  std::string t(text::trim(cur));
  if (!t.empty()) out.push_back(t);
  return out;
}

// A sentence made safe as Step text: single line, never read as an opener.
inline std::string step_text(std::string s) {
  s = text::collapse_ws(s);
  while (!s.empty() && s.back() == ':') s.back() = '.';
  if (s.empty()) s = "continue";
  return s;
}

inline std::string describe(const sig::MaybeType& t) {
  using sig::TypeKind;
  if (!t) return "the result";
  switch (t->kind) {
    case TypeKind::Bool: return "a boolean";
    case TypeKind::Int:
    case TypeKind::Long: return "an integer";
    case TypeKind::Float:
    case TypeKind::Double: return "a number";
    case TypeKind::Str: return "a string";
    case TypeKind::Char: return "a character";
    case TypeKind::List: return "a list";
    case TypeKind::Map: return "a mapping";
    case TypeKind::Optional: return "an optional value";
    case TypeKind::Tuple: return "a tuple";
    case TypeKind::Opaque: return "a value of type " + t->text;
  }
  return "the result";
}

// Splits "..., if <cond>, <rest>" into a branch.
inline std::optional<scot::Branch> branch_from(const std::string& sentence) {
  std::string low = text::to_lower(sentence);
  std::size_t at = std::string::npos;
  for (std::size_t i = 0; i + 2 <= low.size(); ++i) {
    if (low.compare(i, 2, "if") != 0) continue;
    bool left = i == 0 || !text::is_ident_char(low[i - 1]);
    bool right = i + 2 == low.size() || !text::is_ident_char(low[i + 2]);
    if (left && right) {
      at = i;
      break;
    }
  }
  if (at == std::string::npos) return std::nullopt;
  std::string_view rest = text::trim(std::string_view(sentence).substr(at + 2));
  std::size_t comma = rest.find(',');
  std::string cond(text::trim(rest.substr(0, comma)));
  while (!cond.empty() && (cond.back() == '.' || cond.back() == ':')) cond.pop_back();
  if (cond.empty()) return std::nullopt;
  std::string then = comma == std::string_view::npos ? "" : std::string(text::trim(rest.substr(comma + 1)));
  if (then.empty()) then = "handle this case";
  return scot::Branch{"if " + text::collapse_ws(cond), {scot::Step{step_text(then)}}, {}};
}

// Deterministic template CoT for a header.
inline scot::ScotDocument scot_template(const sig::Header& h) {
  auto sents = sentences(h.docstring);
  scot::ScotDocument doc;
  doc.output_spec = "return " + describe(h.signature.return_type);
  if (sents.empty()) {
    doc.input_spec = "the arguments of " + h.signature.name;
    doc.body.push_back(scot::Step{"compute the result of " + h.signature.name});
    return doc;
  }
  doc.input_spec = step_text(sents.front());

  bool branched = false;
  auto emit = [&](const std::string& s, scot::NodeList& into) {
    into.push_back(scot::Step{step_text(s)});
    if (branched) return;
    if (auto b = branch_from(s)) {
      into.push_back(std::move(*b));
      branched = true;
    }
  };

  const sig::Param* list_param = nullptr;
  for (const auto& p : h.signature.params)
    if (p.type && p.type->kind == sig::TypeKind::List) {
      list_param = &p;
      break;
    }

  emit(sents.front(), doc.body);
  std::vector<std::string> middle;
  if (sents.size() > 2) middle.assign(sents.begin() + 1, sents.end() - 1);
  if (list_param) {
    scot::Loop loop{"for each item in " + list_param->name, {}};
    for (const auto& s : middle) emit(s, loop.body);
    if (loop.body.empty()) loop.body.push_back(scot::Step{"process the current item"});
    doc.body.push_back(std::move(loop));
  } else {
    for (const auto& s : middle) emit(s, doc.body);
  }
  if (sents.size() > 1) emit(sents.back(), doc.body);
  return doc;
}

inline bool trivial_body(std::string_view solution) {
  for (auto& l : text::split_lines(solution)) {
    std::string_view t = text::trim(l);
    if (t.empty() || t[0] == '#') continue;
    if (t != "pass" && t != "...") return false;
  }
  return true;
}

// CQ heuristic over Python source: a real body, and a docstring that names
// every parameter.
inline bool cq_verdict(std::string_view code) {
  std::size_t def = code.find("def ");
  if (def == std::string_view::npos) return false;
  std::size_t q = code.find("'''", def);
  std::size_t dq = code.find("\"\"\"", def);
  std::string_view quote = "'''";
  if (dq != std::string_view::npos && (q == std::string_view::npos || dq < q)) {
    q = dq;
    quote = "\"\"\"";
  }
  if (q == std::string_view::npos) return false;
  std::size_t close = code.find(quote, q + 3);
  if (close == std::string_view::npos) return false;
  std::string_view sig_text = text::trim(code.substr(def, q - def));
  std::string_view doc = code.substr(q + 3, close - q - 3);
  std::string_view solution = code.substr(close + 3);
  sig::SignatureIR ir;
  try {
    ir = sig::parse_signature(LanguageId::Python, sig_text);
  } catch (const Error&) {
    return false;
  }
  if (trivial_body(solution)) return false;
  for (const auto& p : ir.params)
    if (!text::contains_word(doc, p.name)) return false;
  return true;
}

// Header in whichever language parses, trying `hint` first.
inline std::optional<sig::Header> any_header(std::string_view src, std::optional<LanguageId> hint) {
  if (hint) {
    try {
      return sig::parse_header(*hint, src);
    } catch (const Error&) {
    }
  }
  for (LanguageId l : kAllLanguages) {
    try {
      return sig::parse_header(l, src);
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

// Text between the last "\nInput:\n" and the trailing "\nOutput:".
inline std::optional<std::string> final_input(std::string_view user) {
  constexpr std::string_view tail = "\nOutput:";
  std::string_view u = text::rtrim(user);
  if (u.size() < tail.size() || u.substr(u.size() - tail.size()) != tail) return std::nullopt;
  u.remove_suffix(tail.size());
  std::size_t at = u.rfind("\nInput:\n");
  if (at == std::string_view::npos) return std::nullopt;
  return std::string(u.substr(at + 8));
}

}  // namespace mock

// Offline stand-in for an LLM. Replies come from the fixture map when the
// request key (or exact user text) is present, otherwise from the rule set
// matching the agent prompt. Pure in (request, seed).
class MockBackend : public ChatBackend {
 public:
  explicit MockBackend(std::uint64_t seed = 42, std::map<std::string, std::string> fixtures = {})
      : seed_(seed), fixtures_(std::move(fixtures)) {}

  std::uint64_t seed() const { return seed_; }
  std::string kind() const override { return "mock"; }

  std::string complete(const ChatRequest& req) override {
    if (!req.key.empty())
      if (auto it = fixtures_.find(req.key); it != fixtures_.end()) return it->second;
    if (auto it = fixtures_.find(req.user); it != fixtures_.end()) return it->second;

    auto input = mock::final_input(req.user);
    if (req.user.find("education value") != std::string::npos) {
      if (!input) throw BackendError("mock: CQ prompt without an input section");
      return mock::cq_verdict(*input) ? "True" : "False";
    }
    if (req.user.find("translate the following docstring and signature") != std::string::npos) {
      if (!input) throw BackendError("mock: CT prompt without an input section");
      auto [src, tgt] = languages_of(req.user);
      auto h = mock::any_header(*input, src);
      if (!h) return *input;  // unparseable: echo, validation will reject
      return sig::translate_header(*h, tgt).raw_text;
    }
    if (req.user.find("write a rough solving process") != std::string::npos) {
      if (!input) throw BackendError("mock: SCoT prompt without an input section");
      auto h = mock::any_header(*input, LanguageId::Python);
      if (!h) return "Let's think step by step.\nInput: the task\nOutput: the result\n1. solve the task";
      return scot::render_scot(mock::scot_template(*h));
    }
    throw BackendError("mock: no fixture or rule matches this request");
  }

 private:
  static std::pair<std::optional<LanguageId>, LanguageId> languages_of(std::string_view user) {
    constexpr std::string_view from = "signature from ";
    std::size_t a = user.find(from);
    if (a == std::string_view::npos) throw BackendError("mock: CT prompt without languages");
    a += from.size();
    std::size_t to = user.find(" to ", a);
    std::size_t comma = user.find(',', to);
    if (to == std::string_view::npos || comma == std::string_view::npos)
      throw BackendError("mock: CT prompt without languages");
    auto src = try_parse_language(user.substr(a, to - a));
    auto tgt = try_parse_language(user.substr(to + 4, comma - to - 4));
    if (!tgt) throw BackendError("mock: unknown target language");
    return {src, *tgt};
  }

  std::uint64_t seed_;
  std::map<std::string, std::string> fixtures_;
};

}  // namespace polyscot::agents
