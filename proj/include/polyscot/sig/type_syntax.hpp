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

// Per-language spelling of the TypeRef lattice: parsing type text into a
// TypeRef, rendering a TypeRef back, and lowering an arbitrary TypeRef into
// the subset a language can spell.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyscot/core/language.hpp"
#include "polyscot/core/text.hpp"
#include "polyscot/sig/types.hpp"

namespace polyscot::sig {

enum class TypePosition { Param, Return };

// JavaScript, Perl and Ruby carry no type annotations at all.
inline constexpr bool is_typed(LanguageId lang) {
  return lang != LanguageId::JavaScript && lang != LanguageId::Perl && lang != LanguageId::Ruby;
}

// Spelling emitted for an absent type; nullopt means the annotation is omitted.
inline std::optional<std::string_view> dynamic_spelling(LanguageId lang, TypePosition pos) {
  switch (lang) {
    case LanguageId::Java: return "Object";
    case LanguageId::CSharp: return "object";
    case LanguageId::Kotlin:
    case LanguageId::Scala:
    case LanguageId::Swift:
      if (pos == TypePosition::Param) return "Any";
      return std::nullopt;
    case LanguageId::Go:
      if (pos == TypePosition::Param) return "any";
      return std::nullopt;
    default: return std::nullopt;
  }
}

namespace detail {

// Top-level spellings that mean "no specific type".
inline bool is_dynamic_top(LanguageId lang, std::string_view t) {
  switch (lang) {
    case LanguageId::Java: return t == "Object" || t == "void";
    case LanguageId::CSharp: return t == "object" || t == "void" || t == "dynamic";
    case LanguageId::Kotlin: return t == "Any" || t == "Unit";
    case LanguageId::Scala: return t == "Any" || t == "Unit";
    case LanguageId::Swift: return t == "Any" || t == "Void" || t == "()";
    case LanguageId::Go: return t == "any" || t == "interface{}" || t == "interface {}";
    case LanguageId::TypeScript: return t == "any" || t == "unknown" || t == "void";
    case LanguageId::Python: return t == "Any" || t == "None" || t == "typing.Any";
    case LanguageId::PHP: return t == "mixed" || t == "void";
    default: return false;
  }
}

inline std::optional<TypeKind> scalar_by_name(LanguageId lang, std::string_view n) {
  using K = TypeKind;
  switch (lang) {
    case LanguageId::Java:
      if (n == "int" || n == "Integer") return K::Int;
      if (n == "long" || n == "Long") return K::Long;
      if (n == "float" || n == "Float") return K::Float;
      if (n == "double" || n == "Double") return K::Double;
      if (n == "boolean" || n == "Boolean") return K::Bool;
      if (n == "String") return K::Str;
      if (n == "char" || n == "Character") return K::Char;
      break;
    case LanguageId::CSharp:
      if (n == "int" || n == "Int32") return K::Int;
      if (n == "long" || n == "Int64") return K::Long;
      if (n == "float" || n == "Single") return K::Float;
      if (n == "double" || n == "Double") return K::Double;
      if (n == "bool" || n == "Boolean") return K::Bool;
      if (n == "string" || n == "String") return K::Str;
      if (n == "char" || n == "Char") return K::Char;
      break;
    case LanguageId::Kotlin:
    case LanguageId::Scala:
      if (n == "Int") return K::Int;
      if (n == "Long") return K::Long;
      if (n == "Float") return K::Float;
      if (n == "Double") return K::Double;
      if (n == "Boolean") return K::Bool;
      if (n == "String") return K::Str;
      if (n == "Char") return K::Char;
      break;
    case LanguageId::Swift:
      if (n == "Int") return K::Int;
      if (n == "Int64") return K::Long;
      if (n == "Float") return K::Float;
      if (n == "Double") return K::Double;
      if (n == "Bool") return K::Bool;
      if (n == "String") return K::Str;
      if (n == "Character") return K::Char;
      break;
    case LanguageId::Go:
      if (n == "int") return K::Int;
      if (n == "int64") return K::Long;
      if (n == "float32") return K::Float;
      if (n == "float64") return K::Double;
      if (n == "bool") return K::Bool;
      if (n == "string") return K::Str;
      if (n == "rune") return K::Char;
      break;
    case LanguageId::TypeScript:
      if (n == "number") return K::Double;
      if (n == "boolean") return K::Bool;
      if (n == "string") return K::Str;
      break;
    case LanguageId::Python:
      if (n == "int") return K::Int;
      if (n == "float") return K::Float;
      if (n == "bool") return K::Bool;
      if (n == "str") return K::Str;
      break;
    case LanguageId::PHP:
      if (n == "int") return K::Int;
      if (n == "float") return K::Float;
      if (n == "bool") return K::Bool;
      if (n == "string") return K::Str;
      break;
    default: break;
  }
  return std::nullopt;
}

enum class Generic { None, List, Map, Optional, Tuple };

inline Generic generic_by_name(LanguageId lang, std::string_view n) {
  switch (lang) {
    case LanguageId::Java:
      if (n == "List" || n == "ArrayList" || n == "LinkedList") return Generic::List;
      if (n == "Map" || n == "HashMap" || n == "TreeMap") return Generic::Map;
      if (n == "Optional") return Generic::Optional;
      break;
    case LanguageId::CSharp:
      if (n == "List" || n == "IList") return Generic::List;
      if (n == "Dictionary" || n == "IDictionary") return Generic::Map;
      if (n == "Nullable") return Generic::Optional;
      break;
    case LanguageId::Kotlin:
      if (n == "List" || n == "MutableList" || n == "ArrayList" || n == "Array") return Generic::List;
      if (n == "Map" || n == "MutableMap" || n == "HashMap") return Generic::Map;
      break;
    case LanguageId::Scala:
      if (n == "List" || n == "Seq" || n == "Vector" || n == "Array") return Generic::List;
      if (n == "Map") return Generic::Map;
      if (n == "Option") return Generic::Optional;
      break;
    case LanguageId::Swift:
      if (n == "Array") return Generic::List;
      if (n == "Dictionary") return Generic::Map;
      if (n == "Optional") return Generic::Optional;
      break;
    case LanguageId::TypeScript:
      if (n == "Array") return Generic::List;
      if (n == "Map" || n == "Record") return Generic::Map;
      break;
    case LanguageId::Python:
      if (n == "List" || n == "list" || n == "typing.List") return Generic::List;
      if (n == "Dict" || n == "dict" || n == "typing.Dict") return Generic::Map;
      if (n == "Optional" || n == "typing.Optional") return Generic::Optional;
      if (n == "Tuple" || n == "tuple" || n == "typing.Tuple") return Generic::Tuple;
      break;
    default: break;
  }
  return Generic::None;
}

inline char generic_open(LanguageId lang) {
  return (lang == LanguageId::Scala || lang == LanguageId::Python) ? '[' : '<';
}

inline char closer_of(char open) {
  switch (open) {
    case '<': return '>';
    case '[': return ']';
    case '(': return ')';
    case '{': return '}';
  }
  return '\0';
}

// Recursive-descent reader over one type expression. Any syntax it cannot
// follow marks the parse as failed; the caller then keeps the whole text
// as Opaque.
class TypeReader {
 public:
  TypeReader(LanguageId lang, std::string_view src) : lang_(lang), s_(src) {}

  std::optional<TypeRef> read_all() {
    auto t = read_type();
    skip_ws();
    if (!t || i_ != s_.size()) return std::nullopt;
    return t;
  }

 private:
  LanguageId lang_;
  std::string_view s_;
  std::size_t i_ = 0;

  void skip_ws() {
    while (i_ < s_.size() && text::is_space(s_[i_])) ++i_;
  }
  bool peek(char c) {
    skip_ws();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++i_;
    return true;
  }
  bool eat_word(std::string_view w) {
    skip_ws();
    if (s_.substr(i_, w.size()) != w) return false;
    std::size_t end = i_ + w.size();
    if (end < s_.size() && text::is_ident_char(s_[end])) return false;
    i_ = end;
    return true;
  }
  std::string read_name() {
    skip_ws();
    std::size_t start = i_;
    if (i_ < s_.size() && text::is_ident_start(s_[i_])) {
      ++i_;
      while (i_ < s_.size() && (text::is_ident_char(s_[i_]) || s_[i_] == '.')) ++i_;
    }
    return std::string(s_.substr(start, i_ - start));
  }
  // Skips a balanced bracket group starting at the current opener.
  bool skip_group() {
    skip_ws();
    if (i_ >= s_.size()) return false;
    std::vector<char> stack;
    do {
      char c = s_[i_];
      if (c == '<' || c == '[' || c == '(' || c == '{') {
        stack.push_back(closer_of(c));
      } else if (c == '>' || c == ']' || c == ')' || c == '}') {
        if (c == '>' && i_ > 0 && (s_[i_ - 1] == '-' || s_[i_ - 1] == '=')) {
          ++i_;
          continue;
        }
        if (stack.empty() || stack.back() != c) return false;
        stack.pop_back();
      }
      ++i_;
    } while (!stack.empty() && i_ < s_.size());
    return stack.empty();
  }
  TypeRef opaque_since(std::size_t start) {
    return TypeRef::opaque(text::collapse_ws(s_.substr(start, i_ - start)));
  }

  std::optional<std::vector<TypeRef>> read_args(char close) {
    std::vector<TypeRef> args;
    if (eat(close)) return args;
    while (true) {
      auto t = read_type();
      if (!t) return std::nullopt;
      args.push_back(std::move(*t));
      if (eat(',')) continue;
      if (eat(close)) return args;
      return std::nullopt;
    }
  }

  std::optional<TypeRef> read_type() {
    if (lang_ == LanguageId::TypeScript) return read_ts_union();
    if (lang_ == LanguageId::Python) return read_py_union();
    auto t = read_prefixed();
    if (!t) return t;
    return read_suffixes(std::move(*t));
  }

  std::optional<TypeRef> read_suffixes(TypeRef t) {
    while (true) {
      skip_ws();
      if (i_ >= s_.size()) return t;
      char c = s_[i_];
      if (c == '?' && (lang_ == LanguageId::CSharp || lang_ == LanguageId::Kotlin ||
                       lang_ == LanguageId::Swift)) {
        ++i_;
        t = TypeRef::optional(std::move(t));
        continue;
      }
      if (c == '[' && i_ + 1 < s_.size() &&
          (lang_ == LanguageId::Java || lang_ == LanguageId::CSharp ||
           lang_ == LanguageId::TypeScript)) {
        std::size_t save = i_;
        ++i_;
        if (eat(']')) {
          t = TypeRef::list(std::move(t));
          continue;
        }
        i_ = save;
      }
      return t;
    }
  }

  std::optional<TypeRef> read_prefixed() {
    skip_ws();
    if (i_ >= s_.size()) return std::nullopt;
    std::size_t start = i_;
    char c = s_[i_];
    if (lang_ == LanguageId::Go) {
      if (c == '*') {
        ++i_;
        auto inner = read_prefixed();
        if (!inner) return std::nullopt;
        return TypeRef::optional(std::move(*inner));
      }
      if (c == '[') {
        ++i_;
        if (!eat(']')) return std::nullopt;
        auto inner = read_prefixed();
        if (!inner) return std::nullopt;
        return TypeRef::list(std::move(*inner));
      }
      if (eat_word("map")) {
        if (!eat('[')) return std::nullopt;
        auto key = read_prefixed();
        if (!key || !eat(']')) return std::nullopt;
        auto value = read_prefixed();
        if (!value) return std::nullopt;
        return TypeRef::map(std::move(*key), std::move(*value));
      }
      if (eat_word("interface") || eat_word("struct") || eat_word("func") || eat_word("chan")) {
        // Spelled structurally; keep verbatim.
        skip_ws();
        while (i_ < s_.size() && (s_[i_] == '{' || s_[i_] == '(' || s_[i_] == '[')) {
          if (!skip_group()) return std::nullopt;
          skip_ws();
          // func results: a trailing name or group.
          if (i_ < s_.size() && text::is_ident_start(s_[i_])) read_name();
        }
        return opaque_since(start);
      }
    }
    if (lang_ == LanguageId::PHP && c == '?') {
      ++i_;
      auto inner = read_prefixed();
      if (!inner) return std::nullopt;
      return TypeRef::optional(std::move(*inner));
    }
    if (c == '(' && (lang_ == LanguageId::CSharp || lang_ == LanguageId::Scala ||
                     lang_ == LanguageId::Swift)) {
      ++i_;
      auto elems = read_args(')');
      if (!elems) return std::nullopt;
      skip_ws();
      // Function types ("(Int) -> Int", "(Int) => Int") stay opaque.
      if (s_.substr(i_, 2) == "->" || s_.substr(i_, 2) == "=>") {
        i_ = s_.size();
        return opaque_since(start);
      }
      if (elems->size() == 1) return std::move(elems->front());
      if (elems->empty()) return opaque_since(start);
      return TypeRef::tuple(std::move(*elems));
    }
    if (c == '[' && lang_ == LanguageId::Swift) {
      ++i_;
      auto first = read_type();
      if (!first) return std::nullopt;
      if (eat(':')) {
        auto value = read_type();
        if (!value || !eat(']')) return std::nullopt;
        return TypeRef::map(std::move(*first), std::move(*value));
      }
      if (!eat(']')) return std::nullopt;
      return TypeRef::list(std::move(*first));
    }
    if (c == '[' && lang_ == LanguageId::TypeScript) {
      ++i_;
      auto elems = read_args(']');
      if (!elems || elems->empty()) return std::nullopt;
      return TypeRef::tuple(std::move(*elems));
    }
    if (c == '(' && lang_ == LanguageId::TypeScript) {
      ++i_;
      auto inner = read_ts_union();
      if (!inner || !eat(')')) return std::nullopt;
      skip_ws();
      if (s_.substr(i_, 2) == "=>") {
        i_ = s_.size();
        return opaque_since(start);
      }
      return inner;
    }
    if (!text::is_ident_start(c)) return std::nullopt;

    std::string name = read_name();
    if (auto k = scalar_by_name(lang_, name)) {
      return TypeRef::scalar(*k);
    }
    Generic g = generic_by_name(lang_, name);
    char open = generic_open(lang_);
    if (g != Generic::None && peek(open)) {
      ++i_;
      auto args = read_args(closer_of(open));
      if (!args) return std::nullopt;
      switch (g) {
        case Generic::List:
          if (args->size() == 1) return TypeRef::list(std::move(args->front()));
          break;
        case Generic::Map:
          if (args->size() == 2) return TypeRef::map(std::move((*args)[0]), std::move((*args)[1]));
          break;
        case Generic::Optional:
          if (args->size() == 1) return TypeRef::optional(std::move(args->front()));
          break;
        case Generic::Tuple:
          if (!args->empty()) return TypeRef::tuple(std::move(*args));
          break;
        case Generic::None: break;
      }
      return opaque_since(start);
    }
    if (peek(open) || (open == '<' && peek('<'))) {
      if (!skip_group()) return std::nullopt;
    }
    return opaque_since(start);
  }

  // TypeScript: T | null | undefined folds into Optional(T).
  std::optional<TypeRef> read_ts_union() {
    std::size_t start = i_;
    std::vector<TypeRef> members;
    bool nullable = false;
    do {
      skip_ws();
      if (eat_word("null") || eat_word("undefined")) {
        nullable = true;
        continue;
      }
      auto t = read_prefixed();
      if (!t) return std::nullopt;
      auto full = read_suffixes(std::move(*t));
      if (!full) return std::nullopt;
      members.push_back(std::move(*full));
    } while (eat('|'));
    if (members.size() != 1) {
      if (members.empty()) return std::nullopt;
      return opaque_since(start);
    }
    if (nullable) return TypeRef::optional(std::move(members.front()));
    return std::move(members.front());
  }

  // Python: X | None folds into Optional(X).
  std::optional<TypeRef> read_py_union() {
    std::size_t start = i_;
    std::vector<TypeRef> members;
    bool nullable = false;
    do {
      skip_ws();
      if (eat_word("None")) {
        nullable = true;
        continue;
      }
      auto t = read_prefixed();
      if (!t) return std::nullopt;
      members.push_back(std::move(*t));
    } while (eat('|'));
    if (members.size() != 1) {
      if (members.empty()) return std::nullopt;
      return opaque_since(start);
    }
    if (nullable) return TypeRef::optional(std::move(members.front()));
    return std::move(members.front());
  }
};

}  // namespace detail

// Parses one type expression. Unrecognized syntax yields Opaque, never an
// error. At top level a language's "no specific type" spellings map to
// absent; nested inside a composite they stay Opaque.
inline MaybeType parse_type(LanguageId lang, std::string_view src, bool top_level = true) {
  std::string collapsed = text::collapse_ws(src);
  if (collapsed.empty()) return std::nullopt;
  if (top_level && detail::is_dynamic_top(lang, collapsed)) return std::nullopt;
  detail::TypeReader reader(lang, collapsed);
  if (auto t = reader.read_all()) return t;
  return TypeRef::opaque(collapsed);
}

namespace detail {

inline std::string scalar_spelling(LanguageId lang, TypeKind k, bool boxed) {
  using K = TypeKind;
  switch (lang) {
    case LanguageId::Java:
      switch (k) {
        case K::Int: return boxed ? "Integer" : "int";
        case K::Long: return boxed ? "Long" : "long";
        case K::Float: return boxed ? "Float" : "float";
        case K::Double: return boxed ? "Double" : "double";
        case K::Bool: return boxed ? "Boolean" : "boolean";
        case K::Str: return "String";
        case K::Char: return boxed ? "Character" : "char";
        default: break;
      }
      break;
    case LanguageId::CSharp:
      switch (k) {
        case K::Int: return "int";
        case K::Long: return "long";
        case K::Float: return "float";
        case K::Double: return "double";
        case K::Bool: return "bool";
        case K::Str: return "string";
        case K::Char: return "char";
        default: break;
      }
      break;
    case LanguageId::Kotlin:
    case LanguageId::Scala:
      switch (k) {
        case K::Int: return "Int";
        case K::Long: return "Long";
        case K::Float: return "Float";
        case K::Double: return "Double";
        case K::Bool: return "Boolean";
        case K::Str: return "String";
        case K::Char: return "Char";
        default: break;
      }
      break;
    case LanguageId::Swift:
      switch (k) {
        case K::Int: return "Int";
        case K::Long: return "Int64";
        case K::Float: return "Float";
        case K::Double: return "Double";
        case K::Bool: return "Bool";
        case K::Str: return "String";
        case K::Char: return "Character";
        default: break;
      }
      break;
    case LanguageId::Go:
      switch (k) {
        case K::Int: return "int";
        case K::Long: return "int64";
        case K::Float: return "float32";
        case K::Double: return "float64";
        case K::Bool: return "bool";
        case K::Str: return "string";
        case K::Char: return "rune";
        default: break;
      }
      break;
    case LanguageId::TypeScript:
      switch (k) {
        case K::Double: return "number";
        case K::Bool: return "boolean";
        case K::Str: return "string";
        default: break;
      }
      break;
    case LanguageId::Python:
      switch (k) {
        case K::Int: return "int";
        case K::Float: return "float";
        case K::Bool: return "bool";
        case K::Str: return "str";
        default: break;
      }
      break;
    case LanguageId::PHP:
      switch (k) {
        case K::Int: return "int";
        case K::Float: return "float";
        case K::Bool: return "bool";
        case K::Str: return "string";
        default: break;
      }
      break;
    default: break;
  }
  return {};
}

[[noreturn]] inline void unrenderable(LanguageId lang, const TypeRef& t) {
  throw SigError(SigErrorKind::UnrenderableType, 0,
                 std::string(type_kind_name(t.kind)) + " has no spelling in " +
                     std::string(language_name(lang)));
}

inline std::string render_list(LanguageId lang, const std::vector<TypeRef>& args, bool boxed);

inline std::string render(LanguageId lang, const TypeRef& t, bool nested) {
  using K = TypeKind;
  if (t.kind == K::Opaque) {
    if (t.text.empty()) unrenderable(lang, t);
    return t.text;
  }
  if (is_scalar(t.kind)) {
    std::string s = scalar_spelling(lang, t.kind, nested);
    if (s.empty()) unrenderable(lang, t);
    return s;
  }
  const auto& a = t.args;
  switch (lang) {
    case LanguageId::Java:
      if (t.kind == K::List) return "List<" + render(lang, a[0], true) + ">";
      if (t.kind == K::Map) return "Map<" + render_list(lang, a, true) + ">";
      if (t.kind == K::Optional) return "Optional<" + render(lang, a[0], true) + ">";
      break;
    case LanguageId::CSharp:
      if (t.kind == K::List) return "List<" + render(lang, a[0], true) + ">";
      if (t.kind == K::Map) return "Dictionary<" + render_list(lang, a, true) + ">";
      if (t.kind == K::Optional) return render(lang, a[0], true) + "?";
      if (t.kind == K::Tuple && a.size() >= 2) return "(" + render_list(lang, a, true) + ")";
      break;
    case LanguageId::Kotlin:
      if (t.kind == K::List) return "List<" + render(lang, a[0], true) + ">";
      if (t.kind == K::Map) return "Map<" + render_list(lang, a, true) + ">";
      if (t.kind == K::Optional) return render(lang, a[0], true) + "?";
      break;
    case LanguageId::Scala:
      if (t.kind == K::List) return "List[" + render(lang, a[0], true) + "]";
      if (t.kind == K::Map) return "Map[" + render_list(lang, a, true) + "]";
      if (t.kind == K::Optional) return "Option[" + render(lang, a[0], true) + "]";
      if (t.kind == K::Tuple && a.size() >= 2) return "(" + render_list(lang, a, true) + ")";
      break;
    case LanguageId::Swift:
      if (t.kind == K::List) return "[" + render(lang, a[0], true) + "]";
      if (t.kind == K::Map) return "[" + render(lang, a[0], true) + ": " + render(lang, a[1], true) + "]";
      if (t.kind == K::Optional) return render(lang, a[0], true) + "?";
      if (t.kind == K::Tuple && a.size() >= 2) return "(" + render_list(lang, a, true) + ")";
      break;
    case LanguageId::Go:
      if (t.kind == K::List) return "[]" + render(lang, a[0], true);
      if (t.kind == K::Map) return "map[" + render(lang, a[0], true) + "]" + render(lang, a[1], true);
      if (t.kind == K::Optional) return "*" + render(lang, a[0], true);
      break;
    case LanguageId::TypeScript:
      if (t.kind == K::List) {
        std::string inner = render(lang, a[0], true);
        if (a[0].kind == K::Optional) inner = "(" + inner + ")";
        return inner + "[]";
      }
      if (t.kind == K::Map) return "Map<" + render_list(lang, a, true) + ">";
      if (t.kind == K::Optional) return render(lang, a[0], true) + " | null";
      if (t.kind == K::Tuple) return "[" + render_list(lang, a, true) + "]";
      break;
    case LanguageId::Python:
      if (t.kind == K::List) return "List[" + render(lang, a[0], true) + "]";
      if (t.kind == K::Map) return "Dict[" + render_list(lang, a, true) + "]";
      if (t.kind == K::Optional) return "Optional[" + render(lang, a[0], true) + "]";
      if (t.kind == K::Tuple) return "Tuple[" + render_list(lang, a, true) + "]";
      break;
    case LanguageId::PHP:
      if (t.kind == K::Optional && a[0].kind != K::Optional) return "?" + render(lang, a[0], true);
      break;
    default: break;
  }
  unrenderable(lang, t);
}

inline std::string render_list(LanguageId lang, const std::vector<TypeRef>& args, bool boxed) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += render(lang, args[i], boxed);
  }
  return out;
}

}  // namespace detail

// Canonical spelling of a type in `lang`. Throws UnrenderableType for kinds
// the language has no spelling for (see lower_type for the mapping used
// during translation).
inline std::string render_type(LanguageId lang, const TypeRef& t) {
  return detail::render(lang, t, false);
}

// Annotation text for a possibly-absent type; nullopt means "omit".
inline std::optional<std::string> render_annotation(LanguageId lang, const MaybeType& t,
                                                    TypePosition pos) {
  if (!is_typed(lang)) return std::nullopt;
  if (!t) {
    if (auto d = dynamic_spelling(lang, pos)) return std::string(*d);
    return std::nullopt;
  }
  return render_type(lang, *t);
}

namespace detail {

inline TypeRef lower_nested(LanguageId lang, const TypeRef& t);

inline TypeRef dynamic_element(LanguageId lang) {
  switch (lang) {
    case LanguageId::Java: return TypeRef::opaque("Object");
    case LanguageId::Kotlin: return TypeRef::opaque("Any");
    case LanguageId::Go: return TypeRef::opaque("any");
    default: return TypeRef::opaque("Object");
  }
}

inline TypeRef lower_scalar(LanguageId lang, TypeKind k) {
  using K = TypeKind;
  switch (lang) {
    case LanguageId::Python:
    case LanguageId::PHP:
      if (k == K::Long) return TypeRef::scalar(K::Int);
      if (k == K::Double) return TypeRef::scalar(K::Float);
      if (k == K::Char) return TypeRef::scalar(K::Str);
      break;
    case LanguageId::TypeScript:
      if (k == K::Int || k == K::Long || k == K::Float) return TypeRef::scalar(K::Double);
      if (k == K::Char) return TypeRef::scalar(K::Str);
      break;
    default: break;
  }
  return TypeRef::scalar(k);
}

inline TypeRef lower_nested(LanguageId lang, const TypeRef& t) {
  using K = TypeKind;
  if (t.kind == K::Opaque) return t;
  if (is_scalar(t.kind)) return lower_scalar(lang, t.kind);
  if (lang == LanguageId::PHP && t.kind != K::Optional) return TypeRef::opaque("array");
  switch (t.kind) {
    case K::List: return TypeRef::list(lower_nested(lang, t.args[0]));
    case K::Map: return TypeRef::map(lower_nested(lang, t.args[0]), lower_nested(lang, t.args[1]));
    case K::Optional: {
      TypeRef inner = lower_nested(lang, t.args[0]);
      if (inner.kind == K::Optional) return inner;
      return TypeRef::optional(std::move(inner));
    }
    case K::Tuple: {
      bool native = lang == LanguageId::Python || lang == LanguageId::TypeScript ||
                    lang == LanguageId::CSharp || lang == LanguageId::Scala ||
                    lang == LanguageId::Swift;
      if (native && (t.args.size() >= 2 || lang == LanguageId::Python ||
                     lang == LanguageId::TypeScript)) {
        std::vector<TypeRef> elems;
        for (const auto& e : t.args) elems.push_back(lower_nested(lang, e));
        return TypeRef::tuple(std::move(elems));
      }
      if (native) return lower_nested(lang, t.args[0]);
      // No tuple spelling: a list of the dynamic element type.
      return TypeRef::list(dynamic_element(lang));
    }
    default: return t;
  }
}

}  // namespace detail

// Maps a type onto the closest one `lang` can spell: untyped languages drop
// it, narrow scalars widen, unsupported composites fall back per table.
inline MaybeType lower_type(LanguageId lang, const MaybeType& t) {
  if (!is_typed(lang) || !t) return std::nullopt;
  return detail::lower_nested(lang, *t);
}

}  // namespace polyscot::sig
