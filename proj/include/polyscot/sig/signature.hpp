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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "polyscot/core/language.hpp"
#include "polyscot/core/text.hpp"
#include "polyscot/sig/type_syntax.hpp"
#include "polyscot/sig/types.hpp"

namespace polyscot::sig {

namespace detail {

constexpr std::size_t npos = std::string_view::npos;

[[noreturn]] inline void malformed(std::size_t at, const std::string& why) {
  throw SigError(SigErrorKind::MalformedSignature, at, why);
}

[[noreturn]] inline void unsupported(std::size_t at, const std::string& why) {
  throw SigError(SigErrorKind::UnsupportedConstruct, at, why);
}

// Cursor over the full signature text; offsets reported in errors are
// absolute into that text.
class Cursor {
 public:
  explicit Cursor(std::string_view s, std::size_t pos = 0) : s_(s), i_(pos) {}

  std::size_t pos() const { return i_; }
  void set(std::size_t p) { i_ = p; }
  std::string_view src() const { return s_; }
  bool done() {
    skip_ws();
    return i_ >= s_.size();
  }
  void skip_ws() {
    while (i_ < s_.size() && text::is_space(s_[i_])) ++i_;
  }
  bool peek(char c) {
    skip_ws();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool peek_str(std::string_view w) {
    skip_ws();
    return s_.substr(i_, w.size()) == w;
  }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++i_;
    return true;
  }
  bool eat_str(std::string_view w) {
    if (!peek_str(w)) return false;
    i_ += w.size();
    return true;
  }
  bool peek_word(std::string_view w) {
    skip_ws();
    if (s_.substr(i_, w.size()) != w) return false;
    std::size_t end = i_ + w.size();
    return end >= s_.size() || !text::is_ident_char(s_[end]);
  }
  bool eat_word(std::string_view w) {
    if (!peek_word(w)) return false;
    i_ += w.size();
    return true;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = i_;
    if (i_ < s_.size() && text::is_ident_start(s_[i_])) {
      ++i_;
      while (i_ < s_.size() && text::is_ident_char(s_[i_])) ++i_;
    }
    return std::string(s_.substr(start, i_ - start));
  }
  std::string_view rest() {
    skip_ws();
    return s_.substr(i_);
  }

 private:
  std::string_view s_;
  std::size_t i_;
};

// Index of the bracket closing the opener at `open_at`, or npos. Arrows
// ("->", "=>") do not count as closers.
inline std::size_t match_close(std::string_view s, std::size_t open_at) {
  std::vector<char> stack;
  for (std::size_t i = open_at; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"' || c == '\'') {
      std::size_t j = s.find(c, i + 1);
      if (j == npos) return npos;
      i = j;
      continue;
    }
    if (c == '(' || c == '[' || c == '{' || c == '<') {
      stack.push_back(closer_of(c));
    } else if (c == ')' || c == ']' || c == '}' || c == '>') {
      if (c == '>' && i > 0 && (s[i - 1] == '-' || s[i - 1] == '=')) continue;
      if (stack.empty()) return npos;
      if (stack.back() != c) {
        // A stray '<' (comparison) inside a default value: drop it and retry.
        if (stack.back() == '>') {
          stack.pop_back();
          --i;
          continue;
        }
        return npos;
      }
      stack.pop_back();
      if (stack.empty()) return i;
    }
  }
  return npos;
}

struct Piece {
  std::string_view text;
  std::size_t offset;  // absolute offset of text[0]
};

// Splits `s` (starting at absolute `base`) at top-level occurrences of `sep`.
inline std::vector<Piece> split_top(std::string_view s, std::size_t base, char sep) {
  std::vector<Piece> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{' || c == '<') ++depth;
    else if (c == ')' || c == ']' || c == '}') --depth;
    else if (c == '>' && !(i > 0 && (s[i - 1] == '-' || s[i - 1] == '='))) --depth;
    else if (c == sep && depth == 0) {
      out.push_back({s.substr(start, i - start), base + start});
      start = i + 1;
    }
  }
  out.push_back({s.substr(start), base + start});
  return out;
}

inline std::size_t find_top(std::string_view s, char target) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == target && depth == 0) return i;
    if (c == '(' || c == '[' || c == '{' || c == '<') ++depth;
    else if (c == ')' || c == ']' || c == '}') --depth;
    else if (c == '>' && !(i > 0 && (s[i - 1] == '-' || s[i - 1] == '='))) --depth;
  }
  return npos;
}

inline Piece trimmed(Piece p) {
  std::string_view l = text::ltrim(p.text);
  std::size_t off = p.offset + (p.text.size() - l.size());
  return {text::rtrim(l), off};
}

// The raw parameter pieces between '(' at `open_at` and its ')'; returns
// the index of ')' through `close_out`.
inline std::vector<Piece> param_pieces(std::string_view s, std::size_t open_at, std::size_t& close_out) {
  std::size_t close = match_close(s, open_at);
  if (close == npos) malformed(open_at, "unbalanced parameter list");
  close_out = close;
  std::string_view inner = s.substr(open_at + 1, close - open_at - 1);
  std::vector<Piece> pieces;
  if (text::trim(inner).empty()) return pieces;
  for (auto p : split_top(inner, open_at + 1, ',')) {
    Piece t = trimmed(p);
    if (t.text.empty()) {
      // Trailing comma is tolerated; an empty slot in the middle is not.
      continue;
    }
    pieces.push_back(t);
  }
  return pieces;
}

inline void reject_default(const Piece& p) {
  std::size_t eq = find_top(p.text, '=');
  if (eq != npos && !(eq + 1 < p.text.size() && p.text[eq + 1] == '>'))
    unsupported(p.offset + eq, "default parameter value");
}

inline void require_ident(std::string_view name, std::size_t at, const char* what) {
  if (!text::is_identifier(name)) malformed(at, std::string("expected ") + what);
}

// Trailing opener tolerance: only whitespace may follow.
inline void expect_end(Cursor& c) {
  if (!c.done()) malformed(c.pos(), "unexpected trailing text");
}

inline void check_unique(const SignatureIR& ir, std::size_t at) {
  std::set<std::string> seen;
  for (const auto& p : ir.params) {
    if (!seen.insert(p.name).second) malformed(at, "duplicate parameter '" + p.name + "'");
  }
}

// "name: Type" or plain "name".
inline Param colon_param(LanguageId lang, const Piece& p, bool allow_untyped) {
  reject_default(p);
  std::size_t colon = find_top(p.text, ':');
  std::string_view name = text::trim(colon == npos ? p.text : p.text.substr(0, colon));
  if (!name.empty() && (name[0] == '*' || name[0] == '.' || name[0] == '{' || name[0] == '['))
    unsupported(p.offset, "variadic or destructuring parameter");
  if (!name.empty() && name.back() == '?') unsupported(p.offset, "optional parameter marker");
  require_ident(name, p.offset, "parameter name");
  if (colon == npos) {
    if (!allow_untyped) malformed(p.offset + p.text.size(), "parameter needs a type");
    return Param{std::string(name), std::nullopt};
  }
  return Param{std::string(name), parse_type(lang, p.text.substr(colon + 1))};
}

inline SignatureIR parse_python(std::string_view s) {
  Cursor c(s);
  c.eat_word("async");
  if (!c.eat_word("def")) malformed(c.pos(), "expected 'def'");
  std::size_t name_at = c.pos();
  SignatureIR ir;
  ir.name = c.ident();
  require_ident(ir.name, name_at, "function name");
  if (!c.peek('(')) malformed(c.pos(), "expected '('");
  std::size_t close = 0;
  for (const auto& p : param_pieces(s, c.pos(), close)) {
    if (p.text == "/" || p.text == "*") unsupported(p.offset, "positional/keyword-only marker");
    ir.params.push_back(colon_param(LanguageId::Python, p, true));
  }
  c.set(close + 1);
  if (c.eat_str("->")) {
    std::string_view rest = c.rest();
    std::size_t base = c.pos();
    std::string_view body = text::rtrim(rest);
    if (!body.empty() && body.back() == ':') body.remove_suffix(1);
    if (text::trim(body).empty()) malformed(base, "missing return annotation");
    if (find_top(body, ':') != npos) malformed(base + find_top(body, ':'), "unexpected ':'");
    ir.return_type = parse_type(LanguageId::Python, body);
    return ir;
  }
  c.eat(':');
  expect_end(c);
  return ir;
}

inline SignatureIR parse_go(std::string_view s) {
  Cursor c(s);
  if (!c.eat_word("func")) malformed(c.pos(), "expected 'func'");
  if (c.peek('(')) unsupported(c.pos(), "method receiver");
  std::size_t name_at = c.pos();
  SignatureIR ir;
  ir.name = c.ident();
  require_ident(ir.name, name_at, "function name");
  if (c.peek('[')) unsupported(c.pos(), "type parameters");
  if (!c.peek('(')) malformed(c.pos(), "expected '('");
  std::size_t close = 0;
  auto pieces = param_pieces(s, c.pos(), close);
  std::vector<std::optional<std::string_view>> types;
  for (const auto& p : pieces) {
    Cursor pc(p.text);
    std::string name = pc.ident();
    require_ident(name, p.offset, "parameter name");
    std::string_view type = pc.rest();
    if (type.substr(0, 3) == "...") unsupported(p.offset + pc.pos(), "variadic parameter");
    ir.params.push_back(Param{name, std::nullopt});
    types.push_back(type.empty() ? std::nullopt : std::optional<std::string_view>(type));
  }
  // Grouped names ("a, b int") take the type of the next typed parameter.
  std::optional<std::string_view> carry;
  for (std::size_t i = types.size(); i-- > 0;) {
    if (types[i]) carry = types[i];
    if (!carry) malformed(pieces[i].offset, "parameter without type");
    ir.params[i].type = parse_type(LanguageId::Go, *carry);
  }
  c.set(close + 1);
  std::string_view rest = text::rtrim(c.rest());
  if (!rest.empty() && rest.back() == '{') rest.remove_suffix(1);
  rest = text::trim(rest);
  if (!rest.empty()) {
    if (rest.find('{') != npos && rest.substr(0, 9) != "interface" && rest.substr(0, 6) != "struct")
      malformed(c.pos(), "unexpected trailing text");
    ir.return_type = parse_type(LanguageId::Go, rest);
  }
  return ir;
}

inline bool is_modifier(LanguageId lang, std::string_view w) {
  static const std::set<std::string_view> java = {"public", "private", "protected", "static",
                                                  "final", "abstract", "synchronized", "native",
                                                  "default", "strictfp"};
  static const std::set<std::string_view> csharp = {"public", "private", "protected", "internal",
                                                    "static", "async", "virtual", "override",
                                                    "sealed", "abstract", "unsafe", "extern",
                                                    "new"};
  return lang == LanguageId::Java ? java.count(w) > 0 : csharp.count(w) > 0;
}

// Java and C#: [modifiers] ReturnType name(Type a, Type b) [throws X] {
inline SignatureIR parse_c_family(LanguageId lang, std::string_view s) {
  Cursor c(s);
  if (c.peek('@') || c.peek('[')) unsupported(c.pos(), "annotation or attribute");
  while (true) {
    std::size_t save = c.pos();
    std::string w = c.ident();
    if (w.empty()) break;
    if (!is_modifier(lang, w)) {
      c.set(save);
      break;
    }
  }
  c.skip_ws();
  std::size_t ret_start = c.pos();
  if (c.peek('<')) unsupported(c.pos(), "generic method");
  // The parameter list opens at the first top-level '(' directly after an
  // identifier; anything before that identifier is the return type.
  std::size_t open = npos;
  int depth = 0;
  for (std::size_t i = ret_start; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '(' && depth == 0) {
      std::size_t j = i;
      while (j > ret_start && text::is_space(s[j - 1])) --j;
      if (j > ret_start && text::is_ident_char(s[j - 1])) {
        open = i;
        break;
      }
      if (j > ret_start && s[j - 1] == '>') unsupported(j - 1, "generic method");
    }
    if (ch == '(' || ch == '<' || ch == '[') ++depth;
    else if (ch == ')' || ch == '>' || ch == ']') --depth;
  }
  if (open == npos) malformed(ret_start, "no parameter list found");
  std::size_t name_end = open;
  while (name_end > ret_start && text::is_space(s[name_end - 1])) --name_end;
  std::size_t name_start = name_end;
  while (name_start > ret_start && text::is_ident_char(s[name_start - 1])) --name_start;
  SignatureIR ir;
  ir.name = std::string(s.substr(name_start, name_end - name_start));
  require_ident(ir.name, name_start, "function name");
  std::string_view ret = text::trim(s.substr(ret_start, name_start - ret_start));
  if (ret.empty()) malformed(ret_start, "missing return type");
  ir.return_type = parse_type(lang, ret);

  std::size_t close = 0;
  for (const auto& p : param_pieces(s, open, close)) {
    if (p.text[0] == '@' || p.text[0] == '[') unsupported(p.offset, "parameter annotation");
    reject_default(p);
    Cursor pc(p.text);
    std::string first = pc.ident();
    if (first == "ref" || first == "out" || first == "in" || first == "params" || first == "this")
      unsupported(p.offset, "'" + first + "' parameter");
    std::string_view body = p.text;
    std::size_t body_off = p.offset;
    if (first == "final") {
      body = text::ltrim(p.text.substr(5));
      body_off = p.offset + (p.text.size() - body.size());
    }
    if (body.find("...") != npos) unsupported(body_off + body.find("..."), "variadic parameter");
    std::size_t ne = body.size();
    std::size_t ns = ne;
    while (ns > 0 && text::is_ident_char(body[ns - 1])) --ns;
    std::string_view name = body.substr(ns);
    std::string_view type = text::trim(body.substr(0, ns));
    require_ident(name, body_off + ns, "parameter name");
    if (type.empty()) malformed(body_off, "parameter needs a type");
    ir.params.push_back(Param{std::string(name), parse_type(lang, type)});
  }
  c.set(close + 1);
  if (lang == LanguageId::Java && c.eat_word("throws")) {
    std::string_view rest = c.rest();
    std::size_t brace = rest.find('{');
    c.set(c.pos() + (brace == npos ? rest.size() : brace));
  }
  c.eat('{') || c.eat(';');
  expect_end(c);
  return ir;
}

// Return text after ':' up to an opener ('{' or '='), for Kotlin/Scala/PHP/TS.
inline std::string_view strip_openers(std::string_view rest) {
  rest = text::rtrim(rest);
  if (!rest.empty() && rest.back() == '{') rest = text::rtrim(rest.substr(0, rest.size() - 1));
  if (rest.size() >= 2 && rest.substr(rest.size() - 2) == "=>")
    rest = text::rtrim(rest.substr(0, rest.size() - 2));
  else if (!rest.empty() && rest.back() == '=')
    rest = text::rtrim(rest.substr(0, rest.size() - 1));
  return rest;
}

inline SignatureIR parse_kotlin(std::string_view s) {
  Cursor c(s);
  static const std::set<std::string_view> mods = {"public", "private", "internal", "protected",
                                                  "inline", "suspend", "override", "open",
                                                  "tailrec", "operator", "infix"};
  while (true) {
    std::size_t save = c.pos();
    std::string w = c.ident();
    if (w.empty() || !mods.count(w)) {
      c.set(save);
      break;
    }
  }
  if (!c.eat_word("fun")) malformed(c.pos(), "expected 'fun'");
  if (c.peek('<')) unsupported(c.pos(), "generic function");
  std::size_t name_at = c.pos();
  SignatureIR ir;
  ir.name = c.ident();
  require_ident(ir.name, name_at, "function name");
  if (c.peek('.')) unsupported(c.pos(), "extension receiver");
  if (!c.peek('(')) malformed(c.pos(), "expected '('");
  std::size_t close = 0;
  for (const auto& p : param_pieces(s, c.pos(), close)) {
    if (p.text.substr(0, 7) == "vararg ") unsupported(p.offset, "vararg parameter");
    ir.params.push_back(colon_param(LanguageId::Kotlin, p, false));
  }
  c.set(close + 1);
  if (c.eat(':')) {
    std::size_t at = c.pos();
    std::string_view ret = strip_openers(c.rest());
    if (ret.empty()) malformed(at, "missing return type");
    ir.return_type = parse_type(LanguageId::Kotlin, ret);
    return ir;
  }
  c.eat('{') || c.eat('=');
  expect_end(c);
  return ir;
}

inline SignatureIR parse_scala(std::string_view s) {
  Cursor c(s);
  while (c.eat_word("override") || c.eat_word("private") || c.eat_word("final") ||
         c.eat_word("protected")) {
  }
  if (!c.eat_word("def")) malformed(c.pos(), "expected 'def'");
  std::size_t name_at = c.pos();
  SignatureIR ir;
  ir.name = c.ident();
  require_ident(ir.name, name_at, "function name");
  if (c.peek('[')) unsupported(c.pos(), "type parameters");
  if (!c.peek('(')) malformed(c.pos(), "expected '('");
  std::size_t close = 0;
  for (const auto& p : param_pieces(s, c.pos(), close)) {
    if (p.text.substr(0, 9) == "implicit ") unsupported(p.offset, "implicit parameter");
    Param param = colon_param(LanguageId::Scala, p, false);
    std::string_view tt = text::rtrim(p.text);
    if (!tt.empty() && tt.back() == '*') unsupported(p.offset, "repeated parameter");
    ir.params.push_back(std::move(param));
  }
  c.set(close + 1);
  if (c.peek('(')) unsupported(c.pos(), "multiple parameter lists");
  if (c.eat(':')) {
    std::size_t at = c.pos();
    std::string_view ret = strip_openers(c.rest());
    if (ret.empty()) malformed(at, "missing return type");
    ir.return_type = parse_type(LanguageId::Scala, ret);
    return ir;
  }
  c.eat('=');
  c.eat('{');
  expect_end(c);
  return ir;
}

inline SignatureIR parse_swift(std::string_view s) {
  Cursor c(s);
  if (c.peek('@')) unsupported(c.pos(), "attribute");
  while (c.eat_word("public") || c.eat_word("private") || c.eat_word("internal") ||
         c.eat_word("static") || c.eat_word("fileprivate") || c.eat_word("open")) {
  }
  if (!c.eat_word("func")) malformed(c.pos(), "expected 'func'");
  std::size_t name_at = c.pos();
  SignatureIR ir;
  ir.name = c.ident();
  require_ident(ir.name, name_at, "function name");
  if (c.peek('<')) unsupported(c.pos(), "generic function");
  if (!c.peek('(')) malformed(c.pos(), "expected '('");
  std::size_t close = 0;
  for (const auto& p : param_pieces(s, c.pos(), close)) {
    reject_default(p);
    std::size_t colon = find_top(p.text, ':');
    if (colon == npos) malformed(p.offset, "parameter needs a type");
    Cursor lc(p.text.substr(0, colon));
    std::string first = lc.ident();
    std::string second = lc.ident();
    if (!lc.done()) malformed(p.offset, "bad parameter label");
    std::string name = second.empty() ? first : second;
    require_ident(name, p.offset, "parameter name");
    if (name == "_") malformed(p.offset, "parameter name");
    std::string_view type = text::trim(p.text.substr(colon + 1));
    if (type.substr(0, 5) == "inout") unsupported(p.offset + colon, "inout parameter");
    if (type.size() >= 3 && type.substr(type.size() - 3) == "...")
      unsupported(p.offset + colon, "variadic parameter");
    ir.params.push_back(Param{name, parse_type(LanguageId::Swift, type)});
  }
  c.set(close + 1);
  c.eat_word("async");
  c.eat_word("throws");
  if (c.eat_str("->")) {
    std::size_t at = c.pos();
    std::string_view ret = strip_openers(c.rest());
    if (ret.empty()) malformed(at, "missing return type");
    ir.return_type = parse_type(LanguageId::Swift, ret);
    return ir;
  }
  c.eat('{');
  expect_end(c);
  return ir;
}

inline SignatureIR parse_js_like(LanguageId lang, std::string_view s) {
  bool ts = lang == LanguageId::TypeScript;
  Cursor c(s);
  c.eat_word("export");
  c.eat_word("async");
  SignatureIR ir;
  bool arrow = false;
  if (c.eat_word("function")) {
    c.eat('*');
    std::size_t name_at = c.pos();
    ir.name = c.ident();
    require_ident(ir.name, name_at, "function name");
  } else if (c.eat_word("const") || c.eat_word("let") || c.eat_word("var")) {
    std::size_t name_at = c.pos();
    ir.name = c.ident();
    require_ident(ir.name, name_at, "function name");
    if (!c.eat('=')) malformed(c.pos(), "expected '='");
    c.eat_word("async");
    if (c.eat_word("function")) {
      c.ident();  // optional inner name
    } else {
      arrow = true;
    }
  } else {
    malformed(c.pos(), "expected 'function' or a const binding");
  }
  if (ts && c.peek('<')) unsupported(c.pos(), "generic function");
  if (!c.peek('(')) malformed(c.pos(), "expected '('");
  std::size_t close = 0;
  for (const auto& p : param_pieces(s, c.pos(), close)) {
    if (!ts && find_top(p.text, ':') != npos) unsupported(p.offset, "type annotation in JavaScript");
    ir.params.push_back(colon_param(lang, p, true));
  }
  c.set(close + 1);
  if (ts && c.eat(':')) {
    std::size_t at = c.pos();
    std::string_view ret = strip_openers(c.rest());
    if (ret.empty()) malformed(at, "missing return type");
    ir.return_type = parse_type(lang, ret);
    return ir;
  }
  if (arrow && !c.eat_str("=>")) malformed(c.pos(), "expected '=>'");
  c.eat('{');
  expect_end(c);
  return ir;
}

inline SignatureIR parse_php(std::string_view s) {
  Cursor c(s);
  while (c.eat_word("public") || c.eat_word("private") || c.eat_word("protected") ||
         c.eat_word("static") || c.eat_word("final") || c.eat_word("abstract")) {
  }
  if (!c.eat_word("function")) malformed(c.pos(), "expected 'function'");
  if (c.peek('&')) unsupported(c.pos(), "return by reference");
  std::size_t name_at = c.pos();
  SignatureIR ir;
  ir.name = c.ident();
  require_ident(ir.name, name_at, "function name");
  if (!c.peek('(')) malformed(c.pos(), "expected '('");
  std::size_t close = 0;
  for (const auto& p : param_pieces(s, c.pos(), close)) {
    reject_default(p);
    std::size_t dollar = p.text.rfind('$');
    if (dollar == npos) malformed(p.offset, "expected '$name'");
    std::string_view before = text::trim(p.text.substr(0, dollar));
    if (!before.empty() && (before.back() == '&' || before.find("...") != npos))
      unsupported(p.offset, "reference or variadic parameter");
    std::string_view name = p.text.substr(dollar + 1);
    require_ident(name, p.offset + dollar + 1, "parameter name");
    ir.params.push_back(Param{std::string(name),
                              before.empty() ? std::nullopt : parse_type(LanguageId::PHP, before)});
  }
  c.set(close + 1);
  if (c.eat(':')) {
    std::size_t at = c.pos();
    std::string_view ret = strip_openers(c.rest());
    if (ret.empty()) malformed(at, "missing return type");
    ir.return_type = parse_type(LanguageId::PHP, ret);
    return ir;
  }
  c.eat('{');
  expect_end(c);
  return ir;
}

inline SignatureIR parse_ruby(std::string_view s) {
  Cursor c(s);
  if (!c.eat_word("def")) malformed(c.pos(), "expected 'def'");
  if (c.peek_word("self")) unsupported(c.pos(), "singleton method");
  std::size_t name_at = c.pos();
  SignatureIR ir;
  ir.name = c.ident();
  require_ident(ir.name, name_at, "function name");
  if (c.peek('?') || c.peek('!') || c.peek('=')) unsupported(c.pos(), "predicate/bang method name");
  std::vector<Piece> pieces;
  if (c.peek('(')) {
    std::size_t close = 0;
    pieces = param_pieces(s, c.pos(), close);
    c.set(close + 1);
  } else if (!c.done()) {
    std::size_t at = c.pos();
    std::string_view rest = c.rest();
    for (auto p : split_top(rest, at, ',')) pieces.push_back(trimmed(p));
    c.set(s.size());
  }
  for (const auto& p : pieces) {
    reject_default(p);
    if (!p.text.empty() && (p.text[0] == '*' || p.text[0] == '&'))
      unsupported(p.offset, "splat or block parameter");
    if (!p.text.empty() && p.text.back() == ':') unsupported(p.offset, "keyword parameter");
    require_ident(p.text, p.offset, "parameter name");
    ir.params.push_back(Param{std::string(p.text), std::nullopt});
  }
  expect_end(c);
  return ir;
}

inline std::vector<Param> perl_scalars(const std::vector<Piece>& pieces) {
  std::vector<Param> out;
  for (const auto& p : pieces) {
    reject_default(p);
    if (p.text.empty() || p.text[0] != '$') unsupported(p.offset, "non-scalar parameter");
    std::string_view name = p.text.substr(1);
    require_ident(name, p.offset + 1, "parameter name");
    out.push_back(Param{std::string(name), std::nullopt});
  }
  return out;
}

inline SignatureIR parse_perl(std::string_view s) {
  Cursor c(s);
  if (!c.eat_word("sub")) malformed(c.pos(), "expected 'sub'");
  std::size_t name_at = c.pos();
  SignatureIR ir;
  ir.name = c.ident();
  require_ident(ir.name, name_at, "function name");
  if (c.peek('(')) {
    std::size_t close = 0;
    auto pieces = param_pieces(s, c.pos(), close);
    ir.params = perl_scalars(pieces);
    c.set(close + 1);
    c.eat('{');
    expect_end(c);
    return ir;
  }
  if (!c.eat('{')) {
    expect_end(c);
    return ir;
  }
  if (c.done()) return ir;
  // Classic unpacking: my ($a, $b) = @_;
  if (!c.eat_word("my")) malformed(c.pos(), "expected 'my (...) = @_;'");
  if (!c.peek('(')) {
    std::size_t at = c.pos();
    std::string_view rest = c.rest();
    std::size_t eq = rest.find('=');
    if (eq == npos) malformed(at, "expected '= @_'");
    ir.params = perl_scalars({trimmed(Piece{rest.substr(0, eq), at})});
    c.set(at + eq);
  } else {
    std::size_t close = 0;
    ir.params = perl_scalars(param_pieces(s, c.pos(), close));
    c.set(close + 1);
  }
  if (!c.eat('=')) malformed(c.pos(), "expected '='");
  if (!c.eat_str("@_")) malformed(c.pos(), "expected '@_'");
  c.eat(';');
  expect_end(c);
  return ir;
}

}  // namespace detail

// Parses one function header in `lang`'s surface syntax. A trailing
// opener ('{', ':', '=') is tolerated; anything else after it is not.
inline SignatureIR parse_signature(LanguageId lang, std::string_view src) {
  SignatureIR ir;
  switch (lang) {
    case LanguageId::Python: ir = detail::parse_python(src); break;
    case LanguageId::Go: ir = detail::parse_go(src); break;
    case LanguageId::Java:
    case LanguageId::CSharp: ir = detail::parse_c_family(lang, src); break;
    case LanguageId::Kotlin: ir = detail::parse_kotlin(src); break;
    case LanguageId::Scala: ir = detail::parse_scala(src); break;
    case LanguageId::Swift: ir = detail::parse_swift(src); break;
    case LanguageId::JavaScript:
    case LanguageId::TypeScript: ir = detail::parse_js_like(lang, src); break;
    case LanguageId::PHP: ir = detail::parse_php(src); break;
    case LanguageId::Ruby: ir = detail::parse_ruby(src); break;
    case LanguageId::Perl: ir = detail::parse_perl(src); break;
  }
  detail::check_unique(ir, 0);
  return ir;
}

// Structural problems that make an IR unrenderable anywhere.
inline std::vector<std::string> signature_problems(const SignatureIR& ir) {
  std::vector<std::string> problems;
  if (!text::is_identifier(ir.name)) problems.push_back("invalid function name '" + ir.name + "'");
  std::set<std::string> seen;
  for (const auto& p : ir.params) {
    if (!text::is_identifier(p.name)) problems.push_back("invalid parameter name '" + p.name + "'");
    if (!seen.insert(p.name).second) problems.push_back("duplicate parameter '" + p.name + "'");
  }
  return problems;
}

// Canonical header line(s) for `lang`, including the opener token. Names are
// emitted verbatim.
inline std::string render_signature(LanguageId lang, const SignatureIR& ir) {
  if (auto problems = signature_problems(ir); !problems.empty())
    throw SigError(SigErrorKind::MalformedSignature, 0, problems.front());
  auto ann = [&](const MaybeType& t, TypePosition pos) { return render_annotation(lang, t, pos); };

  std::vector<std::string> params;
  for (const auto& p : ir.params) {
    auto t = ann(p.type, TypePosition::Param);
    switch (lang) {
      case LanguageId::Go: params.push_back(p.name + " " + *t); break;
      case LanguageId::Java:
      case LanguageId::CSharp: params.push_back(*t + " " + p.name); break;
      case LanguageId::PHP: params.push_back(t ? *t + " $" + p.name : "$" + p.name); break;
      case LanguageId::Perl: params.push_back("$" + p.name); break;
      default: params.push_back(t ? p.name + ": " + *t : p.name); break;
    }
  }
  std::string plist = text::join(params, ", ");
  auto ret = ann(ir.return_type, TypePosition::Return);
  const std::string& n = ir.name;
  switch (lang) {
    case LanguageId::Python: return "def " + n + "(" + plist + ")" + (ret ? " -> " + *ret : "") + ":";
    case LanguageId::Go: return "func " + n + "(" + plist + ")" + (ret ? " " + *ret : "") + " {";
    case LanguageId::Java:
    case LanguageId::CSharp: return "public static " + *ret + " " + n + "(" + plist + ") {";
    case LanguageId::JavaScript: return "const " + n + " = function (" + plist + ") {";
    case LanguageId::TypeScript:
      return "const " + n + " = function (" + plist + ")" + (ret ? ": " + *ret : "") + " {";
    case LanguageId::Kotlin: return "fun " + n + "(" + plist + ")" + (ret ? ": " + *ret : "") + " {";
    case LanguageId::Scala: return "def " + n + "(" + plist + ")" + (ret ? ": " + *ret : "") + " = {";
    case LanguageId::Swift: return "func " + n + "(" + plist + ")" + (ret ? " -> " + *ret : "") + " {";
    case LanguageId::PHP: return "function " + n + "(" + plist + ")" + (ret ? ": " + *ret : "") + " {";
    case LanguageId::Ruby: return params.empty() ? "def " + n : "def " + n + "(" + plist + ")";
    case LanguageId::Perl:
      return params.empty() ? "sub " + n + " {" : "sub " + n + " {\n    my (" + plist + ") = @_;";
  }
  return {};
}

// The IR `lang` can express: every type passed through lower_type.
inline SignatureIR lower_signature(LanguageId lang, const SignatureIR& ir) {
  SignatureIR out = ir;
  for (auto& p : out.params) p.type = lower_type(lang, p.type);
  out.return_type = lower_type(lang, ir.return_type);
  return out;
}

inline bool has_opaque(const MaybeType& t) {
  if (!t) return false;
  if (t->kind == TypeKind::Opaque) return true;
  return std::any_of(t->args.begin(), t->args.end(), [](const TypeRef& a) { return has_opaque(a); });
}

}  // namespace polyscot::sig
