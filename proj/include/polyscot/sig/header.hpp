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

#include "polyscot/core/language.hpp"
#include "polyscot/core/text.hpp"
#include "polyscot/sig/docstring.hpp"
#include "polyscot/sig/signature.hpp"
#include "polyscot/sig/types.hpp"

namespace polyscot::sig {

namespace detail {

inline bool is_preamble_line(std::string_view line) {
  line = text::trim(line);
  if (line.empty()) return true;
  for (std::string_view p : {"import ", "from ", "package ", "using ", "use ", "require", "<?php", "#!",
                             "#include", "@file:"}) {
    if (line.substr(0, p.size()) == p) return true;
  }
  return false;
}

inline bool opens_doc(const DocConvention& conv, std::string_view line) {
  line = text::ltrim(line);
  switch (conv.delimiter) {
    case CommentDelimiter::TripleQuote: return line.substr(0, 3) == "'''" || line.substr(0, 3) == "\"\"\"";
    case CommentDelimiter::StarBlock: return line.substr(0, 3) == "/**";
    case CommentDelimiter::LinePrefix:
      return line.substr(0, conv.line_prefix.size()) == conv.line_prefix &&
             !(conv.line_prefix == "//" && line.substr(0, 3) == "///");
  }
  return false;
}

inline std::size_t offset_of_line(const std::vector<std::string>& lines, std::size_t idx) {
  std::size_t off = 0;
  for (std::size_t i = 0; i < idx && i < lines.size(); ++i) off += lines[i].size() + 1;
  return off;
}

// Python: preamble, def line(s) ending in ':', then an indented docstring.
inline Header parse_python_header(std::string_view src) {
  auto lines = text::split_lines(src);
  std::size_t i = 0;
  while (i < lines.size() && is_preamble_line(lines[i]) && text::trim(lines[i]).substr(0, 4) != "def ") ++i;
  if (i == lines.size()) throw SigError(SigErrorKind::MalformedSignature, src.size(), "no 'def' found");
  std::size_t sig_start = i;
  // The signature runs until a line whose trimmed text ends with ':'.
  while (i < lines.size() && text::rtrim(lines[i]).empty() == false &&
         text::rtrim(lines[i]).back() != ':')
    ++i;
  if (i == lines.size()) i = lines.size() - 1;
  std::vector<std::string> sig_lines(lines.begin() + static_cast<std::ptrdiff_t>(sig_start),
                                     lines.begin() + static_cast<std::ptrdiff_t>(i + 1));
  Header h;
  h.language = LanguageId::Python;
  h.signature = parse_signature(LanguageId::Python, text::join(sig_lines, "\n"));
  std::vector<std::string> rest(lines.begin() + static_cast<std::ptrdiff_t>(i + 1), lines.end());
  auto body = text::dedent(rest);
  text::strip_blank_edges(body);
  if (!body.empty()) {
    try {
      h.docstring = parse_docstring(LanguageId::Python, text::join(body, "\n"));
    } catch (const SigError& e) {
      throw SigError(e.kind(), offset_of_line(lines, i + 1) + e.offset(), "docstring: " + e.detail());
    }
  }
  h.raw_text = std::string(src);
  return h;
}

// Other languages: preamble, optional doc comment, then the signature.
inline Header parse_commented_header(LanguageId lang, std::string_view src) {
  DocConvention conv = doc_convention(lang);
  auto lines = text::split_lines(src);
  std::size_t i = 0;
  while (i < lines.size() && !opens_doc(conv, lines[i]) && is_preamble_line(lines[i])) ++i;
  Header h;
  h.language = lang;
  if (i < lines.size() && opens_doc(conv, lines[i])) {
    std::size_t doc_start = i;
    if (conv.delimiter == CommentDelimiter::StarBlock) {
      while (i < lines.size() && lines[i].find("*/") == std::string::npos) ++i;
      if (i == lines.size())
        throw SigError(SigErrorKind::MalformedDocstring, src.size(), "unterminated '/**' block");
      ++i;
    } else {
      while (i < lines.size() && opens_doc(conv, lines[i])) ++i;
    }
    std::vector<std::string> doc(lines.begin() + static_cast<std::ptrdiff_t>(doc_start),
                                 lines.begin() + static_cast<std::ptrdiff_t>(i));
    try {
      h.docstring = parse_docstring(lang, text::join(doc, "\n"));
    } catch (const SigError& e) {
      throw SigError(e.kind(), offset_of_line(lines, doc_start) + e.offset(), e.detail());
    }
  }
  std::vector<std::string> sig(lines.begin() + static_cast<std::ptrdiff_t>(i), lines.end());
  text::strip_blank_edges(sig);
  if (sig.empty()) throw SigError(SigErrorKind::MalformedSignature, src.size(), "no signature after docstring");
  try {
    h.signature = parse_signature(lang, text::join(sig, "\n"));
  } catch (const SigError& e) {
    throw SigError(e.kind(), offset_of_line(lines, i) + e.offset(), e.detail());
  }
  h.raw_text = std::string(src);
  return h;
}

inline bool is_persona_line(std::string_view line) {
  constexpr std::string_view head = "You're an expert ";
  constexpr std::string_view tail = " programmer";
  line = text::trim(line);
  if (!line.empty() && line.back() == '.') line.remove_suffix(1);
  return line.size() > head.size() + tail.size() && line.substr(0, head.size()) == head &&
         line.substr(line.size() - tail.size()) == tail;
}

}  // namespace detail

// Parses a docstring + signature block ("header") in `lang`. Import and
// package lines before the header are skipped.
inline Header parse_header(LanguageId lang, std::string_view src) {
  if (lang == LanguageId::Python) return detail::parse_python_header(src);
  return detail::parse_commented_header(lang, src);
}

inline std::string render_header(LanguageId lang, const DocstringIR& doc, const SignatureIR& sig) {
  std::string s = render_signature(lang, sig);
  if (doc.empty()) return s;
  std::string d = render_docstring(lang, doc);
  if (lang == LanguageId::Python) return s + "\n" + text::indent_lines(d, "    ");
  return d + "\n" + s;
}

inline std::string persona_line(LanguageId lang) {
  return "You're an expert " + std::string(language_name(lang)) + " programmer";
}

// Summary adjusted for `tgt`: non-Python targets lead with the persona line,
// Python drops it.
inline std::vector<std::string> retarget_summary(std::vector<std::string> summary, LanguageId tgt) {
  bool had = !summary.empty() && detail::is_persona_line(summary.front());
  if (had) summary.erase(summary.begin());
  if (tgt != LanguageId::Python) summary.insert(summary.begin(), persona_line(tgt));
  return summary;
}

inline Header translate_header(const Header& src, LanguageId tgt) {
  if (tgt == src.language) {
    // Identity: canonical re-render, content untouched.
    std::string text = render_header(tgt, src.docstring, src.signature);
    return parse_header(tgt, text);
  }
  DocstringIR doc = src.docstring;
  doc.summary = retarget_summary(std::move(doc.summary), tgt);
  SignatureIR sig = lower_signature(tgt, src.signature);
  std::string text = render_header(tgt, doc, sig);
  return parse_header(tgt, text);
}

}  // namespace polyscot::sig
