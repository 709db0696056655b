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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyscot/core/error.hpp"
#include "polyscot/core/language.hpp"

namespace polyscot::sig {

enum class TypeKind { Int, Long, Float, Double, Bool, Str, Char, List, Map, Optional, Tuple, Opaque };

inline constexpr std::string_view type_kind_name(TypeKind k) {
  switch (k) {
    case TypeKind::Int: return "Int";
    case TypeKind::Long: return "Long";
    case TypeKind::Float: return "Float";
    case TypeKind::Double: return "Double";
    case TypeKind::Bool: return "Bool";
    case TypeKind::Str: return "Str";
    case TypeKind::Char: return "Char";
    case TypeKind::List: return "List";
    case TypeKind::Map: return "Map";
    case TypeKind::Optional: return "Optional";
    case TypeKind::Tuple: return "Tuple";
    case TypeKind::Opaque: return "Opaque";
  }
  return "?";
}

inline constexpr bool is_scalar(TypeKind k) {
  return k == TypeKind::Int || k == TypeKind::Long || k == TypeKind::Float ||
         k == TypeKind::Double || k == TypeKind::Bool || k == TypeKind::Str ||
         k == TypeKind::Char;
}

// Language-neutral type. Composite kinds own their children in `args`
// (List: 1, Map: 2, Optional: 1, Tuple: n >= 1); Opaque keeps the source
// spelling, whitespace-collapsed, in `text`.
struct TypeRef {
  TypeKind kind = TypeKind::Opaque;
  std::vector<TypeRef> args;
  std::string text;

  static TypeRef scalar(TypeKind k) { return TypeRef{k, {}, {}}; }
  static TypeRef list(TypeRef elem) { return TypeRef{TypeKind::List, {std::move(elem)}, {}}; }
  static TypeRef map(TypeRef key, TypeRef value) {
    return TypeRef{TypeKind::Map, {std::move(key), std::move(value)}, {}};
  }
  static TypeRef optional(TypeRef inner) {
    return TypeRef{TypeKind::Optional, {std::move(inner)}, {}};
  }
  static TypeRef tuple(std::vector<TypeRef> elems) {
    return TypeRef{TypeKind::Tuple, std::move(elems), {}};
  }
  static TypeRef opaque(std::string source) { return TypeRef{TypeKind::Opaque, {}, std::move(source)}; }

  friend bool operator==(const TypeRef&, const TypeRef&) = default;
};

// Optional<TypeRef> is the "absent" type: an unannotated parameter or an
// unstated return type.
using MaybeType = std::optional<TypeRef>;

struct Param {
  std::string name;
  MaybeType type;
  friend bool operator==(const Param&, const Param&) = default;
};

struct SignatureIR {
  std::string name;
  std::vector<Param> params;
  MaybeType return_type;
  friend bool operator==(const SignatureIR&, const SignatureIR&) = default;
};

struct ParamDoc {
  std::string name;
  std::string text;
  friend bool operator==(const ParamDoc&, const ParamDoc&) = default;
};

// Summary and section texts are stored whitespace-normalized (single spaces,
// trimmed); example lines are kept raw apart from common dedent.
struct DocstringIR {
  std::vector<std::string> summary;
  std::vector<ParamDoc> param_docs;
  std::optional<std::string> returns_doc;
  std::optional<std::vector<std::string>> examples;

  bool empty() const {
    return summary.empty() && param_docs.empty() && !returns_doc && !examples;
  }
  friend bool operator==(const DocstringIR&, const DocstringIR&) = default;
};

struct Header {
  LanguageId language = LanguageId::Python;
  DocstringIR docstring;
  SignatureIR signature;
  std::string raw_text;
};

enum class SigErrorKind { MalformedSignature, UnsupportedConstruct, UnrenderableType, MalformedDocstring };

struct SigErrorNames {
  static constexpr std::string_view name(SigErrorKind k) {
    switch (k) {
      case SigErrorKind::MalformedSignature: return "MalformedSignature";
      case SigErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
      case SigErrorKind::UnrenderableType: return "UnrenderableType";
      case SigErrorKind::MalformedDocstring: return "MalformedDocstring";
    }
    return "?";
  }
};

// Parse errors carry the byte offset into the input where recognition failed.
class SigError : public KindedError<SigErrorKind, SigErrorNames> {
 public:
  SigError(SigErrorKind kind, std::size_t offset, const std::string& detail)
      : KindedError(kind, detail + " (at byte " + std::to_string(offset) + ")"), offset_(offset), detail_(detail) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

}  // namespace polyscot::sig
