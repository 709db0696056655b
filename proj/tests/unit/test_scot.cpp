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

#include <filesystem>

#include "polyscot/scot/grammar.hpp"
#include "support.hpp"

using namespace polyscot;
using namespace polyscot::scot;
using testsupport::fixture;
namespace fs = std::filesystem;

namespace {

std::vector<fs::path> files_in(const std::string& dir, const std::string& ext = ".txt") {
  std::vector<fs::path> out;
  for (auto& e : fs::directory_iterator(fixture(dir)))
    if (e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Kind of the first problem: parse error, else first validation violation.
std::optional<ScotErrorKind> rejection(const std::string& text) {
  try {
    auto d = parse_scot(text);
    auto r = validate(d);
    if (r.empty()) return std::nullopt;
    return r.front().kind;
  } catch (const ScotError& e) {
    return e.kind();
  }
}

}  // namespace

TEST(ScotFixtures, ValidParseCleanAndIdempotent) {
  auto files = files_in("scot/valid");
  ASSERT_GE(files.size(), 12u);
  for (auto& p : files) {
    SCOPED_TRACE(p.filename().string());
    auto doc = parse_scot(read_file(p.string()));
    EXPECT_TRUE(validate(doc).empty());
    std::string r = render_scot(doc);
    EXPECT_EQ(parse_scot(r), doc);
    EXPECT_EQ(render_scot(parse_scot(r)), r);
  }
}

TEST(ScotFixtures, InvalidRejectedWithNamedKind) {
  json expected = json::parse(read_file(fixture("scot/invalid/expected.json")));
  auto files = files_in("scot/invalid");
  ASSERT_EQ(files.size(), expected.size());
  ASSERT_GE(files.size(), 10u);
  for (auto& p : files) {
    SCOPED_TRACE(p.filename().string());
    auto k = rejection(read_file(p.string()));
    ASSERT_TRUE(k.has_value());
    EXPECT_EQ(ScotErrorNames::name(*k), expected.at(p.filename().string()).get<std::string>());
  }
}

TEST(ScotFixtures, GoldenRenders) {
  for (auto& g : files_in("scot/golden")) {
    SCOPED_TRACE(g.filename().string());
    auto doc = parse_scot(read_file(fixture("scot/valid/" + g.filename().string())));
    EXPECT_EQ(render_scot(doc), read_file(g.string()));
  }
}

TEST(ScotParse, CanonicalShape) {
  auto doc = parse_scot(read_file(fixture("scot/valid/canonical.txt")));
  auto want = document_from_json(json::parse(read_file(fixture("scot/canonical.ast.json"))));
  EXPECT_EQ(doc, want);
  ASSERT_EQ(doc.body.size(), 3u);
  EXPECT_TRUE(doc.body[0].is_step());
  ASSERT_TRUE(doc.body[1].is_loop());
  ASSERT_EQ(doc.body[1].loop().body.size(), 2u);
  EXPECT_TRUE(doc.body[1].loop().body[0].is_step());
  ASSERT_TRUE(doc.body[1].loop().body[1].is_branch());
  EXPECT_EQ(doc.body[1].loop().body[1].branch().then_body.size(), 1u);
  EXPECT_TRUE(doc.body[2].is_step());
  EXPECT_EQ(structure_fingerprint(doc), "S L( S B( S ) ) S");
}

TEST(ScotParse, ElifDesugarsToNestedBranch) {
  auto doc = parse_scot(
      "Let's think step by step.\nInput: n\nOutput: a word\n"
      "1. if n > 0:\n    2. return pos\n3. elif n < 0:\n    4. return neg\n5. else:\n    6. return zero\n");
  ASSERT_EQ(doc.body.size(), 1u);
  const auto& b = doc.body[0].branch();
  ASSERT_EQ(b.else_body.size(), 1u);
  const auto& nested = b.else_body[0].branch();
  EXPECT_EQ(nested.condition, "if n < 0");
  EXPECT_EQ(nested.else_body.size(), 1u);
}

TEST(ScotParse, ErrorCarriesLine) {
  try {
    parse_scot("Let's think step by step.\nInput: x\nOutput: y\n1. a\n  2. b\n");
    FAIL();
  } catch (const ScotError& e) {
    EXPECT_EQ(e.kind(), ScotErrorKind::IndentationError);
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(ScotValidate, PathsPointAtOffendingNode) {
  ScotDocument d{"x", "y", {Step{"a"}, Loop{"for i in x", {Step{"b"}, Branch{"if c", {}, {}}}}}};
  auto r = validate(d);
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r.front().kind, ScotErrorKind::EmptyBody);
  EXPECT_EQ(r.front().path, "body[1].body[1]");

  ScotDocument e{"x", "y", {Branch{"if c", {Step{"ok"}}, {Step{"two\nlines"}}}}};
  auto r2 = validate(e);
  ASSERT_FALSE(r2.empty());
  EXPECT_EQ(r2.front().path, "body[0].else[0]");

  ScotDocument f{"", "y", {Step{"a"}}};
  ASSERT_FALSE(validate(f).empty());
  EXPECT_EQ(validate(f).front().kind, ScotErrorKind::MissingIOSpec);
  EXPECT_THROW(render_scot(f), ScotError);
}

TEST(ScotProperty, RenderParseIdempotentOver1000Docs) {
  testsupport::ScotGen gen(20240601);
  for (int i = 0; i < 1000; ++i) {
    auto doc = gen.document();
    ASSERT_TRUE(validate(doc).empty());
    std::string noisy = gen.noisy_text(doc);
    ScotDocument parsed;
    ASSERT_NO_THROW(parsed = parse_scot(noisy)) << noisy;
    ASSERT_EQ(parsed, doc) << noisy;
    std::string once = render_scot(parsed);
    ASSERT_EQ(render_scot(parse_scot(once)), once);
  }
}

TEST(ScotJson, RoundTrip) {
  testsupport::ScotGen gen(7);
  for (int i = 0; i < 50; ++i) {
    auto doc = gen.document();
    EXPECT_EQ(document_from_json(json::parse(to_json(doc).dump())), doc);
  }
}
