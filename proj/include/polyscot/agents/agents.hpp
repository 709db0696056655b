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

#include <functional>
#include <string>
#include <vector>

#include "polyscot/agents/backend.hpp"
#include "polyscot/agents/prompts.hpp"
#include "polyscot/core/language.hpp"
#include "polyscot/core/text.hpp"
#include "polyscot/scot/grammar.hpp"
#include "polyscot/sig/header.hpp"

namespace polyscot::agents {

struct SeedSample {
  std::string task_id;
  LanguageId language = LanguageId::Python;
  std::string docstring;
  std::string signature;
  std::string solution;
  std::string tests;
};

class UnparseableVerdict : public Error {
 public:
  explicit UnparseableVerdict(const std::string& reply)
      : Error("UnparseableVerdict: expected True or False, got '" + reply + "'") {}
};

class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(std::vector<std::string> report)
      : Error("ValidationFailed: " + text::join(report, "; ")), report_(std::move(report)) {}
  const std::vector<std::string>& report() const noexcept { return report_; }

 private:
  std::vector<std::string> report_;
};

class ScotParseFailed : public Error {
 public:
  ScotParseFailed(scot::ScotErrorKind kind, const std::string& detail)
      : Error("ScotParseFailed(" + std::string(scot::ScotErrorNames::name(kind)) + "): " + detail), kind_(kind) {}
  scot::ScotErrorKind kind() const noexcept { return kind_; }

 private:
  scot::ScotErrorKind kind_;
};

// Source header text for a seed: the signature followed by its docstring.
// A bare docstring (no delimiters) is wrapped in the language's convention.
inline std::string seed_header_text(const SeedSample& s) {
  std::string doc(text::trim(s.docstring));
  bool delimited = false;
  switch (sig::doc_convention(s.language).delimiter) {
    case sig::CommentDelimiter::TripleQuote: delimited = doc.rfind("'''", 0) == 0 || doc.rfind("\"\"\"", 0) == 0; break;
    case sig::CommentDelimiter::StarBlock: delimited = doc.rfind("/**", 0) == 0; break;
    case sig::CommentDelimiter::LinePrefix:
      delimited = doc.rfind(std::string(sig::doc_convention(s.language).line_prefix), 0) == 0;
      break;
  }
  if (!delimited) {
    std::string wrapped;
    switch (sig::doc_convention(s.language).delimiter) {
      case sig::CommentDelimiter::TripleQuote: wrapped = "'''\n" + doc + "\n'''"; break;
      case sig::CommentDelimiter::StarBlock: wrapped = "/**\n" + text::indent_lines(doc, " * ") + "\n */"; break;
      case sig::CommentDelimiter::LinePrefix:
        wrapped = text::indent_lines(doc, std::string(sig::doc_convention(s.language).line_prefix) + " ");
        break;
    }
    doc = wrapped;
  }
  std::string sig_text(text::trim(s.signature));
  if (s.language == LanguageId::Python) return sig_text + "\n" + text::indent_lines(doc, "    ");
  return doc + "\n" + sig_text;
}

inline sig::Header seed_header(const SeedSample& s) { return sig::parse_header(s.language, seed_header_text(s)); }

namespace detail {

// Runs `attempt` up to 1 + max_retries times; the last error propagates.
template <typename T, typename Fn>
T with_retries(const AgentConfig& cfg, Fn&& attempt) {
  if (!cfg.backend) throw BackendError("no chat backend configured");
  for (int i = 0;; ++i) {
    try {
      return attempt();
    } catch (const MissingBinding&) {
      throw;
    } catch (const Error&) {
      if (i >= cfg.max_retries) throw;
      if (cfg.backend->wants_backoff() && cfg.sleep) cfg.sleep(backoff_delay(i + 1));
    }
  }
}

inline std::string ask(const AgentConfig& cfg, const Prompt& p, const std::string& key) {
  ChatRequest req{p.system, p.user, cfg.decoding, key};
  req.decoding.temperature = 0.0;
  return cfg.backend->complete(req);
}

inline std::string guard_input(const AgentConfig& cfg, const std::string& s) {
  return truncate_tokens(s, cfg.decoding.max_input_tokens);
}

inline std::string guard_output(const AgentConfig& cfg, const std::string& s) {
  return truncate_tokens(s, cfg.decoding.max_new_tokens);
}

}  // namespace detail

inline bool parse_verdict(std::string_view reply) {
  std::string_view t = text::trim(reply);
  if (text::iequals(t, "true")) return true;
  if (text::iequals(t, "false")) return false;
  throw UnparseableVerdict(std::string(t));
}

inline bool cq_check(const SeedSample& sample, const AgentConfig& cfg) {
  std::string code = seed_header_text(sample) + "\n" + sample.solution;
  Prompt p = render_prompt(AgentKind::CQ, {{"code", detail::guard_input(cfg, code)}});
  return detail::with_retries<bool>(cfg, [&] { return parse_verdict(detail::ask(cfg, p, sample.task_id + "/cq")); });
}

// ---- CTAgent exemplars ----

// Canonical source exemplar: the below_zero header, as a Python docstring.
inline const sig::Header& exemplar_source() {
  static const sig::Header h = sig::parse_header(
      LanguageId::Python, "def below_zero(operations) -> bool:\n    ''' You're given a list of (more information)\n    '''");
  return h;
}

struct Exemplar {
  std::string input;
  std::string output;
};

// One exemplar pair per (src, tgt), derived from the canonical source through
// the per-language template tables.
inline Exemplar ct_exemplar(LanguageId src, LanguageId tgt) {
  sig::Header in = src == LanguageId::Python ? exemplar_source() : sig::translate_header(exemplar_source(), src);
  sig::Header out = sig::translate_header(in, tgt);
  return Exemplar{in.raw_text, out.raw_text};
}

inline std::vector<std::string> header_problems(const sig::Header& ref, const sig::Header& got) {
  std::vector<std::string> out;
  if (got.signature.name != ref.signature.name)
    out.push_back("name preservation: expected '" + ref.signature.name + "', got '" + got.signature.name + "'");
  if (got.signature.params.size() != ref.signature.params.size()) {
    out.push_back("arity preservation: expected " + std::to_string(ref.signature.params.size()) + " parameters, got " +
                  std::to_string(got.signature.params.size()));
  } else {
    for (std::size_t i = 0; i < ref.signature.params.size(); ++i)
      if (got.signature.params[i].name != ref.signature.params[i].name)
        out.push_back("parameter order: position " + std::to_string(i) + " is '" + got.signature.params[i].name +
                      "', expected '" + ref.signature.params[i].name + "'");
  }
  return out;
}

// Strips a surrounding ``` fence if the model added one.
inline std::string strip_fence(std::string_view reply) {
  std::string_view t = text::trim(reply);
  if (t.substr(0, 3) != "```") return std::string(t);
  std::size_t nl = t.find('\n');
  std::size_t close = t.rfind("```");
  if (nl == std::string_view::npos || close <= nl) return std::string(t);
  return std::string(text::trim(t.substr(nl + 1, close - nl - 1)));
}

inline sig::Header ct_translate(const sig::Header& src, LanguageId tgt, const AgentConfig& cfg,
                                const std::string& key = {}) {
  Exemplar ex = ct_exemplar(src.language, tgt);
  Prompt p = render_prompt(AgentKind::CT, {{"source_language", std::string(language_name(src.language))},
                                           {"target_language", std::string(language_name(tgt))},
                                           {"example_input", ex.input},
                                           {"example_output", ex.output},
                                           {"input", detail::guard_input(cfg, src.raw_text)}});
  return detail::with_retries<sig::Header>(cfg, [&] {
    std::string reply = strip_fence(detail::guard_output(cfg, detail::ask(cfg, p, key)));
    sig::Header h;
    try {
      h = sig::parse_header(tgt, reply);
    } catch (const sig::SigError& e) {
      throw ValidationFailed({"parse: " + std::string(e.what())});
    }
    if (auto problems = header_problems(src, h); !problems.empty()) throw ValidationFailed(problems);
    return h;
  });
}

inline sig::Header ct_translate(const SeedSample& sample, LanguageId tgt, const AgentConfig& cfg) {
  return ct_translate(seed_header(sample), tgt, cfg, sample.task_id + "/ct/" + std::string(language_name(tgt)));
}

inline scot::ScotDocument scot_generate(const sig::Header& header, const AgentConfig& cfg, const std::string& key = {}) {
  Prompt p = render_prompt(AgentKind::SCoT, {{"demo_input", std::string(templates::kSCoTDemoInput)},
                                             {"demo_output", std::string(templates::kSCoTDemoOutput)},
                                             {"input", detail::guard_input(cfg, header.raw_text)}});
  return detail::with_retries<scot::ScotDocument>(cfg, [&] {
    std::string reply = strip_fence(detail::guard_output(cfg, detail::ask(cfg, p, key)));
    scot::ScotDocument doc;
    try {
      doc = scot::parse_scot(reply);
    } catch (const scot::ScotError& e) {
      throw ScotParseFailed(e.kind(), e.what());
    }
    if (auto report = scot::validate(doc); !report.empty())
      throw ScotParseFailed(report.front().kind, report.front().path + ": " + report.front().message);
    return doc;
  });
}

}  // namespace polyscot::agents
