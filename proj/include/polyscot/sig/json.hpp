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

#include <json.hpp>

#include "polyscot/core/error.hpp"
#include "polyscot/core/language.hpp"
#include "polyscot/sig/types.hpp"

namespace polyscot::sig {

using nlohmann::json;

inline TypeKind type_kind_from_name(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(TypeKind::Opaque); ++k) {
    if (type_kind_name(static_cast<TypeKind>(k)) == name) return static_cast<TypeKind>(k);
  }
  throw Error("unknown type kind '" + std::string(name) + "'");
}

inline json to_json(const TypeRef& t) {
  json j{{"kind", type_kind_name(t.kind)}, {"args", json::array()}};
  for (const auto& a : t.args) j["args"].push_back(to_json(a));
  if (t.kind == TypeKind::Opaque) j["text"] = t.text;
  return j;
}

inline json to_json(const MaybeType& t) { return t ? to_json(*t) : json(nullptr); }

inline TypeRef type_from_json(const json& j) {
  TypeRef t;
  t.kind = type_kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("args"))
    for (const auto& a : j.at("args")) t.args.push_back(type_from_json(a));
  if (j.contains("text")) t.text = j.at("text").get<std::string>();
  return t;
}

inline MaybeType maybe_type_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return type_from_json(j);
}

inline json to_json(const SignatureIR& ir) {
  json params = json::array();
  for (const auto& p : ir.params) params.push_back({{"name", p.name}, {"type", to_json(p.type)}});
  return {{"name", ir.name}, {"params", params}, {"return_type", to_json(ir.return_type)}};
}

inline SignatureIR signature_from_json(const json& j) {
  SignatureIR ir;
  ir.name = j.at("name").get<std::string>();
  for (const auto& p : j.at("params"))
    ir.params.push_back(Param{p.at("name").get<std::string>(), maybe_type_from_json(p.value("type", json()))});
  ir.return_type = maybe_type_from_json(j.value("return_type", json()));
  return ir;
}

inline json to_json(const DocstringIR& d) {
  json params = json::array();
  for (const auto& p : d.param_docs) params.push_back({{"name", p.name}, {"text", p.text}});
  json j{{"summary", d.summary}, {"param_docs", params}};
  j["returns_doc"] = d.returns_doc ? json(*d.returns_doc) : json(nullptr);
  j["examples"] = d.examples ? json(*d.examples) : json(nullptr);
  return j;
}

inline DocstringIR docstring_from_json(const json& j) {
  DocstringIR d;
  d.summary = j.value("summary", std::vector<std::string>{});
  if (j.contains("param_docs"))
    for (const auto& p : j.at("param_docs"))
      d.param_docs.push_back(ParamDoc{p.at("name").get<std::string>(), p.at("text").get<std::string>()});
  if (j.contains("returns_doc") && !j.at("returns_doc").is_null())
    d.returns_doc = j.at("returns_doc").get<std::string>();
  if (j.contains("examples") && !j.at("examples").is_null())
    d.examples = j.at("examples").get<std::vector<std::string>>();
  return d;
}

// Fixture-corpus record: {"language", "raw_header", "ir": {"signature", "docstring"}}.
inline json to_json(const Header& h) {
  return {{"language", language_name(h.language)},
          {"raw_header", h.raw_text},
          {"ir", {{"signature", to_json(h.signature)}, {"docstring", to_json(h.docstring)}}}};
}

inline Header header_from_json(const json& j) {
  Header h;
  h.language = parse_language(j.at("language").get<std::string>());
  h.raw_text = j.value("raw_header", "");
  const json& ir = j.at("ir");
  h.signature = signature_from_json(ir.at("signature"));
  if (ir.contains("docstring")) h.docstring = docstring_from_json(ir.at("docstring"));
  return h;
}

}  // namespace polyscot::sig
