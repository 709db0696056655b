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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "polyscot/core/error.hpp"
#include "polyscot/core/text.hpp"

namespace polyscot {

// The closed set of target languages, in the column order of the published
// results table.
enum class LanguageId {
  CSharp,
  Go,
  Java,
  JavaScript,
  Kotlin,
  Perl,
  PHP,
  Python,
  Ruby,
  Scala,
  Swift,
  TypeScript,
};

inline constexpr std::array<LanguageId, 12> kAllLanguages = {
    LanguageId::CSharp, LanguageId::Go,     LanguageId::Java,  LanguageId::JavaScript,
    LanguageId::Kotlin, LanguageId::Perl,   LanguageId::PHP,   LanguageId::Python,
    LanguageId::Ruby,   LanguageId::Scala,  LanguageId::Swift, LanguageId::TypeScript,
};

inline constexpr std::string_view language_name(LanguageId lang) {
  switch (lang) {
    case LanguageId::CSharp: return "CSharp";
    case LanguageId::Go: return "Go";
    case LanguageId::Java: return "Java";
    case LanguageId::JavaScript: return "JavaScript";
    case LanguageId::Kotlin: return "Kotlin";
    case LanguageId::Perl: return "Perl";
    case LanguageId::PHP: return "PHP";
    case LanguageId::Python: return "Python";
    case LanguageId::Ruby: return "Ruby";
    case LanguageId::Scala: return "Scala";
    case LanguageId::Swift: return "Swift";
    case LanguageId::TypeScript: return "TypeScript";
  }
  return "?";
}

inline constexpr std::string_view file_extension(LanguageId lang) {
  switch (lang) {
    case LanguageId::CSharp: return ".cs";
    case LanguageId::Go: return ".go";
    case LanguageId::Java: return ".java";
    case LanguageId::JavaScript: return ".js";
    case LanguageId::Kotlin: return ".kt";
    case LanguageId::Perl: return ".pl";
    case LanguageId::PHP: return ".php";
    case LanguageId::Python: return ".py";
    case LanguageId::Ruby: return ".rb";
    case LanguageId::Scala: return ".scala";
    case LanguageId::Swift: return ".swift";
    case LanguageId::TypeScript: return ".ts";
  }
  return "";
}

inline constexpr std::size_t language_index(LanguageId lang) {
  return static_cast<std::size_t>(lang);
}

class UnknownLanguage : public Error {
 public:
  explicit UnknownLanguage(std::string_view id)
      : Error("unknown language identifier: '" + std::string(id) + "'") {}
};

// Exact (case-sensitive) match against the canonical names, plus the common
// lowercase spellings used by benchmark files ("csharp", "typescript").
inline std::optional<LanguageId> try_parse_language(std::string_view id) {
  for (LanguageId lang : kAllLanguages) {
    if (text::iequals(id, language_name(lang))) return lang;
  }
  if (text::iequals(id, "C#") || text::iequals(id, "cs")) return LanguageId::CSharp;
  if (text::iequals(id, "golang")) return LanguageId::Go;
  if (text::iequals(id, "js")) return LanguageId::JavaScript;
  if (text::iequals(id, "ts")) return LanguageId::TypeScript;
  return std::nullopt;
}

inline LanguageId parse_language(std::string_view id) {
  if (auto lang = try_parse_language(id)) return *lang;
  throw UnknownLanguage(id);
}

}  // namespace polyscot
