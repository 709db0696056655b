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

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "polyscot/sig/header.hpp"
#include "polyscot/sig/json.hpp"
#include "support.hpp"

using namespace polyscot;
using namespace polyscot::sig;
using testsupport::fixture;

namespace {

struct Corpus {
  std::vector<std::tuple<std::string, LanguageId, std::string>> rows;
};

const Corpus& corpus() {
  static Corpus c = [] {
    Corpus out;
    for (auto& j : testsupport::read_jsonl(fixture("headers.jsonl")))
      out.rows.emplace_back(j["id"].get<std::string>(), parse_language(j["language"].get<std::string>()),
                            j["source"].get<std::string>());
    return out;
  }();
  return c;
}

SigErrorKind kind_of(LanguageId l, const std::string& src) {
  try {
    parse_header(l, src);
  } catch (const SigError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << src;
  return SigErrorKind::MalformedDocstring;
}

}  // namespace

TEST(SigCorpus, SizeAndCoverage) {
  std::map<LanguageId, int> per;
  for (auto& [id, l, src] : corpus().rows) ++per[l];
  EXPECT_GE(corpus().rows.size(), 60u);
  for (auto l : kAllLanguages) EXPECT_GE(per[l], 5) << language_name(l);
}

TEST(SigCorpus, ParseRenderParse) {
  for (auto& [id, l, src] : corpus().rows) {
    SCOPED_TRACE(id);
    Header a = parse_header(l, src);
    std::string rendered = render_header(l, a.docstring, a.signature);
    Header b = parse_header(l, rendered);
    EXPECT_EQ(a.signature, b.signature);
    EXPECT_EQ(a.docstring, b.docstring);
    EXPECT_EQ(render_header(l, b.docstring, b.signature), rendered);
  }
}

TEST(SigCorpus, JsonRoundTrip) {
  for (auto& [id, l, src] : corpus().rows) {
    SCOPED_TRACE(id);
    Header a = parse_header(l, src);
    Header b = header_from_json(json::parse(to_json(a).dump()));
    EXPECT_EQ(a.language, b.language);
    EXPECT_EQ(a.signature, b.signature);
    EXPECT_EQ(a.docstring, b.docstring);
  }
}

TEST(SigCorpus, TranslateToEveryLanguageKeepsNameAndParams) {
  for (auto& [id, l, src] : corpus().rows) {
    Header a = parse_header(l, src);
    for (auto t : kAllLanguages) {
      SCOPED_TRACE(id + " -> " + std::string(language_name(t)));
      Header tr = translate_header(a, t);
      Header back = parse_header(t, tr.raw_text);
      EXPECT_EQ(back.signature.name, a.signature.name);
      ASSERT_EQ(back.signature.params.size(), a.signature.params.size());
      for (std::size_t i = 0; i < a.signature.params.size(); ++i)
        EXPECT_EQ(back.signature.params[i].name, a.signature.params[i].name);
    }
  }
}

TEST(SigPython, UntypedParamBoolReturn) {
  SignatureIR ir = parse_signature(LanguageId::Python, "def below_zero(operations) -> bool:");
  EXPECT_EQ(ir.name, "below_zero");
  ASSERT_EQ(ir.params.size(), 1u);
  EXPECT_EQ(ir.params[0].name, "operations");
  EXPECT_FALSE(ir.params[0].type.has_value());
  ASSERT_TRUE(ir.return_type.has_value());
  EXPECT_EQ(ir.return_type->kind, TypeKind::Bool);
}

TEST(SigPython, TypedListParam) {
  SignatureIR ir = parse_signature(LanguageId::Python, "def f(xs: List[int], m: Dict[str, float]) -> Optional[str]:");
  ASSERT_EQ(ir.params.size(), 2u);
  ASSERT_TRUE(ir.params[0].type);
  EXPECT_EQ(ir.params[0].type->kind, TypeKind::List);
  ASSERT_EQ(ir.params[0].type->args.size(), 1u);
  EXPECT_EQ(ir.params[0].type->args[0].kind, TypeKind::Int);
  EXPECT_EQ(ir.params[1].type->kind, TypeKind::Map);
  EXPECT_EQ(ir.return_type->kind, TypeKind::Optional);
}

TEST(SigRender, TypeScriptBelowZero) {
  SignatureIR ir = parse_signature(LanguageId::Python, "def below_zero(operations) -> bool:");
  std::string ts = render_signature(LanguageId::TypeScript, ir);
  EXPECT_EQ(ts, "const below_zero = function (operations): boolean {");
}

TEST(SigRender, GoGroupedParamsParse) {
  SignatureIR ir = parse_signature(LanguageId::Go, "func Gcd(a, b int64) int64 {");
  ASSERT_EQ(ir.params.size(), 2u);
  EXPECT_EQ(ir.params[0].type, ir.params[1].type);
  EXPECT_EQ(ir.params[0].type->kind, TypeKind::Long);
}

TEST(SigErrors, Kinds) {
  EXPECT_EQ(kind_of(LanguageId::Python, "def (x):\n    '''doc'''"), SigErrorKind::MalformedSignature);
  EXPECT_EQ(kind_of(LanguageId::Python, "def f(x, x):\n    '''doc'''"), SigErrorKind::MalformedSignature);
  EXPECT_EQ(kind_of(LanguageId::Python, "def f(*args):\n    '''doc'''"), SigErrorKind::UnsupportedConstruct);
  EXPECT_EQ(kind_of(LanguageId::Java, "/**\n * doc\n */\npublic static int f(int x"), SigErrorKind::MalformedSignature);
}

TEST(SigErrors, MessageCarriesKindOnce) {
  try {
    parse_header(LanguageId::Python, "def (x):\n    '''doc'''");
    FAIL();
  } catch (const SigError& e) {
    std::string m = e.what();
    EXPECT_EQ(m.rfind("MalformedSignature: ", 0), 0u) << m;
    EXPECT_EQ(m.find("MalformedSignature", 1), std::string::npos) << m;
  }
}

TEST(SigDocstring, PythonSectionsToJavadocTags) {
  Header py = parse_header(LanguageId::Python,
                           "def add(a: int, b: int) -> int:\n"
                           "    \"\"\"Add two numbers.\n\n"
                           "    Args:\n"
                           "        a: first addend\n"
                           "        b: second addend\n\n"
                           "    Returns:\n"
                           "        the sum\n"
                           "    \"\"\"");
  ASSERT_EQ(py.docstring.param_docs.size(), 2u);
  EXPECT_EQ(py.docstring.param_docs[1].name, "b");
  EXPECT_EQ(py.docstring.returns_doc.value_or(""), "the sum");
  Header java = translate_header(py, LanguageId::Java);
  EXPECT_NE(java.raw_text.find("@param a first addend"), std::string::npos) << java.raw_text;
  EXPECT_NE(java.raw_text.find("@return the sum"), std::string::npos) << java.raw_text;
  Header back = parse_header(LanguageId::Java, java.raw_text);
  EXPECT_EQ(back.docstring.param_docs, py.docstring.param_docs);
  EXPECT_EQ(back.docstring.returns_doc, py.docstring.returns_doc);
}

TEST(SigDocstring, CSharpXmlEscapes) {
  DocstringIR d;
  d.summary = {"Returns a < b && b > 0."};
  SignatureIR ir = parse_signature(LanguageId::Python, "def lt(a: int, b: int) -> bool:");
  std::string cs = render_header(LanguageId::CSharp, d, ir);
  EXPECT_NE(cs.find("&lt;"), std::string::npos) << cs;
  EXPECT_EQ(parse_header(LanguageId::CSharp, cs).docstring.summary, d.summary);
}

TEST(SigTypes, DynamicLanguagesDropTypes) {
  SignatureIR ir = parse_signature(LanguageId::Python, "def f(xs: List[int]) -> int:");
  for (auto l : {LanguageId::Ruby, LanguageId::Perl, LanguageId::JavaScript}) {
    SignatureIR low = lower_signature(l, ir);
    Header h = parse_header(l, render_header(l, {}, low));
    EXPECT_EQ(h.signature.params.size(), 1u);
  }
}
