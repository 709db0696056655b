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
#include "polyscot/sig/types.hpp"

namespace polyscot::sig {

enum class CommentDelimiter { TripleQuote, StarBlock, LinePrefix };
enum class DocStyle { Sections, Tags, Xml, SwiftMarkup };

struct DocConvention {
  CommentDelimiter delimiter;
  std::string_view line_prefix;  // LinePrefix only: "///", "//", "#"
  DocStyle style;
  std::string_view return_tag;   // Tags only: "@return" or "@returns"
  std::string_view params_heading;  // Sections only
};

inline DocConvention doc_convention(LanguageId lang) {
  using D = CommentDelimiter;
  using S = DocStyle;
  switch (lang) {
    case LanguageId::Python: return {D::TripleQuote, "", S::Sections, "", "Args:"};
    case LanguageId::Go: return {D::LinePrefix, "//", S::Sections, "", "Parameters:"};
    case LanguageId::Perl: return {D::LinePrefix, "#", S::Sections, "", "Parameters:"};
    case LanguageId::Ruby: return {D::LinePrefix, "#", S::Tags, "@return", ""};
    case LanguageId::CSharp: return {D::LinePrefix, "///", S::Xml, "", ""};
    case LanguageId::Swift: return {D::LinePrefix, "///", S::SwiftMarkup, "", ""};
    case LanguageId::JavaScript:
    case LanguageId::TypeScript: return {D::StarBlock, "", S::Tags, "@returns", ""};
    case LanguageId::Java:
    case LanguageId::Kotlin:
    case LanguageId::Scala:
    case LanguageId::PHP: return {D::StarBlock, "", S::Tags, "@return", ""};
  }
  return {D::StarBlock, "", S::Tags, "@return", ""};
}

namespace detail {

[[noreturn]] inline void bad_doc(std::size_t at, const std::string& why) {
  throw SigError(SigErrorKind::MalformedDocstring, at, why);
}

// Strips the comment delimiters, returning the content lines.
inline std::vector<std::string> doc_content(const DocConvention& conv, std::string_view src) {
  std::string_view body = text::trim(src);
  std::vector<std::string> lines;
  if (body.empty()) return lines;
  switch (conv.delimiter) {
    case CommentDelimiter::TripleQuote: {
      std::string_view q = body.substr(0, 3);
      if (q != "'''" && q != "\"\"\"") bad_doc(0, "expected an opening triple quote");
      body.remove_prefix(3);
      std::size_t end = body.rfind(q);
      if (end == std::string_view::npos || !text::trim(body.substr(end + 3)).empty())
        bad_doc(src.size(), "unterminated triple-quoted block");
      body = body.substr(0, end);
      if (body.find(q) != std::string_view::npos) bad_doc(body.find(q) + 3, "stray triple quote");
      lines = text::split_lines(body);
      break;
    }
    case CommentDelimiter::StarBlock: {
      if (body.substr(0, 3) != "/**") bad_doc(0, "expected '/**'");
      body.remove_prefix(3);
      if (body.size() < 2 || body.substr(body.size() - 2) != "*/")
        bad_doc(src.size(), "unterminated '/**' block");
      body.remove_suffix(2);
      if (body.find("*/") != std::string_view::npos) bad_doc(body.find("*/") + 3, "stray '*/'");
      for (auto& raw : text::split_lines(body)) {
        std::string_view l = text::ltrim(raw);
        if (!l.empty() && l[0] == '*') {
          l.remove_prefix(1);
          if (!l.empty() && l[0] == ' ') l.remove_prefix(1);
          lines.emplace_back(l);
        } else {
          lines.emplace_back(raw);
        }
      }
      break;
    }
    case CommentDelimiter::LinePrefix: {
      std::size_t offset = 0;
      for (auto& raw : text::split_lines(body)) {
        std::string_view l = text::ltrim(raw);
        if (l.substr(0, conv.line_prefix.size()) != conv.line_prefix)
          bad_doc(offset, "line outside the comment run");
        l.remove_prefix(conv.line_prefix.size());
        // "////" or "#!" style variants are not doc lines.
        if (conv.line_prefix == "//" && !l.empty() && l[0] == '/')
          bad_doc(offset, "unexpected '///' in a '//' run");
        if (!l.empty() && l[0] == ' ') l.remove_prefix(1);
        lines.emplace_back(l);
        offset += raw.size() + 1;
      }
      break;
    }
  }
  return lines;
}

inline std::string first_word(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && !text::is_space(s[i])) ++i;
  return std::string(s.substr(0, i));
}

inline std::string_view after_word(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && !text::is_space(s[i])) ++i;
  return text::ltrim(s.substr(i));
}

inline void append_text(std::string& dst, std::string_view more) {
  std::string m = text::collapse_ws(more);
  if (m.empty()) return;
  if (!dst.empty()) dst += ' ';
  dst += m;
}

inline void push_summary(DocstringIR& ir, std::string_view line) {
  std::string l = text::collapse_ws(line);
  if (!l.empty()) ir.summary.push_back(std::move(l));
}

inline void finish_examples(DocstringIR& ir, std::vector<std::string>& ex, bool seen) {
  if (!seen) return;
  auto d = text::dedent(ex);
  text::strip_blank_edges(d);
  ir.examples = std::move(d);
}

// Tag style: @param name text / @return(s) text / @example + raw lines.
// Known tags also split mid-line ("/** @param xs v @return t */").
inline DocstringIR parse_tags(const std::vector<std::string>& lines) {
  DocstringIR ir;
  enum class Sec { Summary, Param, Return } sec = Sec::Summary;
  std::vector<std::string> ex;
  bool in_examples = false;
  auto is_known = [](std::string_view w) {
    return w == "@param" || w == "@return" || w == "@returns" || w == "@example";
  };
  for (const auto& raw : lines) {
    if (in_examples) {
      ex.push_back(raw);
      continue;
    }
    std::string_view line = text::trim(raw);
    if (line.empty()) continue;
    if (line[0] == '@' && !is_known(first_word(line))) {
      sec = Sec::Summary;
      push_summary(ir, line);
      continue;
    }
    // Split at known tags preceded by whitespace.
    std::vector<std::string_view> segs;
    std::size_t start = 0;
    for (std::size_t i = 1; i < line.size(); ++i) {
      if (line[i] == '@' && text::is_space(line[i - 1]) && is_known(first_word(line.substr(i)))) {
        segs.push_back(line.substr(start, i - start));
        start = i;
      }
    }
    segs.push_back(line.substr(start));
    for (std::size_t si = 0; si < segs.size(); ++si) {
      std::string_view seg = text::trim(segs[si]);
      std::string w = first_word(seg);
      if (w == "@example") {
        in_examples = true;
        std::string_view tail = after_word(seg);
        // Remaining segments on this line belong to the example verbatim.
        std::string rest(tail);
        for (std::size_t k = si + 1; k < segs.size(); ++k) rest += " " + std::string(text::trim(segs[k]));
        if (!text::trim(rest).empty()) ex.push_back(rest);
        break;
      }
      if (w == "@param") {
        std::string_view tail = after_word(seg);
        std::string name = first_word(tail);
        if (!name.empty() && name[0] == '$') name.erase(0, 1);
        ir.param_docs.push_back(ParamDoc{name, text::collapse_ws(after_word(tail))});
        sec = Sec::Param;
        continue;
      }
      if (w == "@return" || w == "@returns") {
        ir.returns_doc = text::collapse_ws(after_word(seg));
        sec = Sec::Return;
        continue;
      }
      switch (sec) {
        case Sec::Summary: push_summary(ir, seg); break;
        case Sec::Param: append_text(ir.param_docs.back().text, seg); break;
        case Sec::Return: append_text(*ir.returns_doc, seg); break;
      }
    }
  }
  finish_examples(ir, ex, in_examples);
  return ir;
}

inline bool heading_is(std::string_view line, std::initializer_list<std::string_view> names) {
  for (auto n : names)
    if (line == n) return true;
  return false;
}

// Sections style (Google-like): summary, then "Args:"/"Parameters:",
// "Returns:", "Examples:" headings. A ">>>" line starts the examples.
inline DocstringIR parse_sections(const std::vector<std::string>& lines) {
  DocstringIR ir;
  enum class Sec { Summary, Params, Return } sec = Sec::Summary;
  std::vector<std::string> ex;
  bool in_examples = false;
  for (const auto& raw : lines) {
    if (in_examples) {
      ex.push_back(raw);
      continue;
    }
    std::string_view line = text::trim(raw);
    if (line.empty()) continue;
    if (heading_is(line, {"Args:", "Arguments:", "Parameters:", "Params:"})) {
      sec = Sec::Params;
      continue;
    }
    if (line.substr(0, 8) == "Returns:" || line.substr(0, 7) == "Return:") {
      std::string_view tail = text::trim(line.substr(line.find(':') + 1));
      ir.returns_doc = text::collapse_ws(tail);
      sec = Sec::Return;
      continue;
    }
    if (heading_is(line, {"Examples:", "Example:"})) {
      in_examples = true;
      continue;
    }
    if (line.substr(0, 3) == ">>>" && sec == Sec::Summary) {
      in_examples = true;
      ex.push_back(raw);
      continue;
    }
    switch (sec) {
      case Sec::Summary: push_summary(ir, line); break;
      case Sec::Params: {
        std::string_view entry = line;
        if (entry.substr(0, 2) == "- ") entry = text::ltrim(entry.substr(2));
        std::size_t colon = entry.find(':');
        std::string_view head = colon == std::string_view::npos ? entry : entry.substr(0, colon);
        std::string name = first_word(text::trim(head));
        if (colon != std::string_view::npos && text::is_identifier(name)) {
          ir.param_docs.push_back(ParamDoc{name, text::collapse_ws(entry.substr(colon + 1))});
        } else if (!ir.param_docs.empty()) {
          append_text(ir.param_docs.back().text, line);
        } else {
          push_summary(ir, line);
        }
        break;
      }
      case Sec::Return: append_text(*ir.returns_doc, line); break;
    }
  }
  finish_examples(ir, ex, in_examples);
  return ir;
}

inline std::string xml_unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '&') {
      if (s.substr(i, 4) == "&lt;") { out += '<'; i += 3; continue; }
      if (s.substr(i, 4) == "&gt;") { out += '>'; i += 3; continue; }
      if (s.substr(i, 5) == "&amp;") { out += '&'; i += 4; continue; }
      if (s.substr(i, 6) == "&quot;") { out += '"'; i += 5; continue; }
    }
    out += s[i];
  }
  return out;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// C# XML doc: <summary>, <param name="x">, <returns>, <example>. Text outside
// known elements lands in the summary.
inline DocstringIR parse_xml(const std::vector<std::string>& lines) {
  DocstringIR ir;
  std::string all = text::join(lines, "\n");
  std::size_t i = 0;
  auto close_of = [&](std::string_view tag, std::size_t from) {
    std::string closing = "</" + std::string(tag) + ">";
    std::size_t at = all.find(closing, from);
    if (at == std::string::npos) bad_doc(from, "unclosed <" + std::string(tag) + ">");
    return std::pair{at, at + closing.size()};
  };
  auto summary_text = [&](std::string_view chunk) {
    for (auto& l : text::split_lines(chunk)) push_summary(ir, xml_unescape(l));
  };
  while (i < all.size()) {
    std::size_t lt = all.find('<', i);
    std::size_t stop = lt == std::string::npos ? all.size() : lt;
    summary_text(std::string_view(all).substr(i, stop - i));
    if (lt == std::string::npos) break;
    std::string_view rest = std::string_view(all).substr(lt);
    if (rest.substr(0, 9) == "<summary>") {
      auto [end, next] = close_of("summary", lt + 9);
      summary_text(std::string_view(all).substr(lt + 9, end - lt - 9));
      i = next;
    } else if (rest.substr(0, 13) == "<param name=\"") {
      std::size_t q = all.find('"', lt + 13);
      if (q == std::string::npos || q + 1 >= all.size() || all[q + 1] != '>')
        bad_doc(lt, "malformed <param> tag");
      std::string name = all.substr(lt + 13, q - lt - 13);
      auto [end, next] = close_of("param", q + 2);
      ir.param_docs.push_back(
          ParamDoc{name, text::collapse_ws(xml_unescape(std::string_view(all).substr(q + 2, end - q - 2)))});
      i = next;
    } else if (rest.substr(0, 9) == "<returns>") {
      auto [end, next] = close_of("returns", lt + 9);
      ir.returns_doc = text::collapse_ws(xml_unescape(std::string_view(all).substr(lt + 9, end - lt - 9)));
      i = next;
    } else if (rest.substr(0, 9) == "<example>") {
      auto [end, next] = close_of("example", lt + 9);
      std::vector<std::string> ex;
      for (auto& l : text::split_lines(std::string_view(all).substr(lt + 9, end - lt - 9)))
        ex.push_back(xml_unescape(l));
      auto d = text::dedent(ex);
      text::strip_blank_edges(d);
      ir.examples = std::move(d);
      i = next;
    } else if (rest.substr(0, 2) == "</") {
      bad_doc(lt, "unbalanced closing tag");
    } else {
      // Unknown element: keep its line verbatim in the summary.
      std::size_t nl = all.find('\n', lt);
      std::size_t stop2 = nl == std::string::npos ? all.size() : nl;
      push_summary(ir, xml_unescape(std::string_view(all).substr(lt, stop2 - lt)));
      i = stop2;
    }
  }
  return ir;
}

// Swift markup: "- Parameter x: text", "- Parameters:" list, "- Returns:",
// "- Example:" followed by raw lines.
inline DocstringIR parse_swift_markup(const std::vector<std::string>& lines) {
  DocstringIR ir;
  enum class Sec { Summary, ParamList, Param, Return } sec = Sec::Summary;
  std::vector<std::string> ex;
  bool in_examples = false;
  for (const auto& raw : lines) {
    if (in_examples) {
      ex.push_back(raw);
      continue;
    }
    std::string_view line = text::trim(raw);
    if (line.empty()) continue;
    if (line.substr(0, 12) == "- Parameter ") {
      std::string_view tail = line.substr(12);
      std::size_t colon = tail.find(':');
      if (colon == std::string_view::npos) {
        push_summary(ir, line);
        sec = Sec::Summary;
        continue;
      }
      ir.param_docs.push_back(ParamDoc{std::string(text::trim(tail.substr(0, colon))),
                                       text::collapse_ws(tail.substr(colon + 1))});
      sec = Sec::Param;
      continue;
    }
    if (line == "- Parameters:") {
      sec = Sec::ParamList;
      continue;
    }
    if (line.substr(0, 10) == "- Returns:") {
      ir.returns_doc = text::collapse_ws(line.substr(10));
      sec = Sec::Return;
      continue;
    }
    if (line.substr(0, 10) == "- Example:") {
      in_examples = true;
      std::string_view tail = text::trim(line.substr(10));
      if (!tail.empty()) ex.emplace_back(tail);
      continue;
    }
    if (sec == Sec::ParamList && line.substr(0, 2) == "- ") {
      std::string_view entry = line.substr(2);
      std::size_t colon = entry.find(':');
      if (colon != std::string_view::npos) {
        ir.param_docs.push_back(ParamDoc{std::string(text::trim(entry.substr(0, colon))),
                                         text::collapse_ws(entry.substr(colon + 1))});
        continue;
      }
    }
    switch (sec) {
      case Sec::Summary: push_summary(ir, line); break;
      case Sec::ParamList:
      case Sec::Param:
        if (ir.param_docs.empty()) push_summary(ir, line);
        else append_text(ir.param_docs.back().text, line);
        break;
      case Sec::Return: append_text(*ir.returns_doc, line); break;
    }
  }
  finish_examples(ir, ex, in_examples);
  return ir;
}

}  // namespace detail

// Parses a comment block written in `lang`'s documentation convention.
inline DocstringIR parse_docstring(LanguageId lang, std::string_view src) {
  DocConvention conv = doc_convention(lang);
  auto lines = detail::doc_content(conv, src);
  switch (conv.style) {
    case DocStyle::Sections: return detail::parse_sections(lines);
    case DocStyle::Tags: return detail::parse_tags(lines);
    case DocStyle::Xml: return detail::parse_xml(lines);
    case DocStyle::SwiftMarkup: return detail::parse_swift_markup(lines);
  }
  return {};
}

// Content lines (without delimiters) for `ir` in `lang`'s convention.
inline std::vector<std::string> doc_body_lines(LanguageId lang, const DocstringIR& ir) {
  DocConvention conv = doc_convention(lang);
  std::vector<std::string> out;
  switch (conv.style) {
    case DocStyle::Sections:
      for (const auto& s : ir.summary) out.push_back(s);
      if (!ir.param_docs.empty()) {
        out.emplace_back(conv.params_heading);
        for (const auto& p : ir.param_docs) out.push_back("    " + p.name + ": " + p.text);
      }
      if (ir.returns_doc) {
        out.emplace_back("Returns:");
        out.push_back("    " + *ir.returns_doc);
      }
      if (ir.examples) {
        out.emplace_back("Examples:");
        for (const auto& e : *ir.examples) out.push_back(e.empty() ? e : "    " + e);
      }
      break;
    case DocStyle::Tags: {
      for (const auto& s : ir.summary) out.push_back(s);
      bool php = lang == LanguageId::PHP;
      for (const auto& p : ir.param_docs)
        out.push_back("@param " + std::string(php ? "$" : "") + p.name + (p.text.empty() ? "" : " " + p.text));
      if (ir.returns_doc)
        out.push_back(std::string(conv.return_tag) + (ir.returns_doc->empty() ? "" : " " + *ir.returns_doc));
      if (ir.examples) {
        out.emplace_back("@example");
        for (const auto& e : *ir.examples) out.push_back(e);
      }
      break;
    }
    case DocStyle::Xml:
      if (!ir.summary.empty()) {
        out.emplace_back("<summary>");
        for (const auto& s : ir.summary) out.push_back(detail::xml_escape(s));
        out.emplace_back("</summary>");
      }
      for (const auto& p : ir.param_docs)
        out.push_back("<param name=\"" + p.name + "\">" + detail::xml_escape(p.text) + "</param>");
      if (ir.returns_doc) out.push_back("<returns>" + detail::xml_escape(*ir.returns_doc) + "</returns>");
      if (ir.examples) {
        out.emplace_back("<example>");
        for (const auto& e : *ir.examples) out.push_back(detail::xml_escape(e));
        out.emplace_back("</example>");
      }
      break;
    case DocStyle::SwiftMarkup:
      for (const auto& s : ir.summary) out.push_back(s);
      for (const auto& p : ir.param_docs) out.push_back("- Parameter " + p.name + ": " + p.text);
      if (ir.returns_doc) out.push_back("- Returns: " + *ir.returns_doc);
      if (ir.examples) {
        out.emplace_back("- Example:");
        for (const auto& e : *ir.examples) out.push_back(e);
      }
      break;
  }
  return out;
}

// Renders `ir` with `lang`'s delimiters. Total for valid IR.
inline std::string render_docstring(LanguageId lang, const DocstringIR& ir) {
  DocConvention conv = doc_convention(lang);
  auto body = doc_body_lines(lang, ir);
  std::string out;
  switch (conv.delimiter) {
    case CommentDelimiter::TripleQuote:
      out = "'''\n";
      for (const auto& l : body) out += l + "\n";
      out += "'''";
      break;
    case CommentDelimiter::StarBlock:
      out = "/**\n";
      for (const auto& l : body) out += l.empty() ? " *\n" : " * " + l + "\n";
      out += " */";
      break;
    case CommentDelimiter::LinePrefix:
      if (body.empty()) return std::string(conv.line_prefix);
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) out += '\n';
        out += std::string(conv.line_prefix) + (body[i].empty() ? "" : " " + body[i]);
      }
      break;
  }
  return out;
}

}  // namespace polyscot::sig
