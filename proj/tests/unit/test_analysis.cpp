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

#include <random>

#include "polyscot/agents/mock.hpp"
#include "polyscot/analysis/rubric.hpp"
#include "polyscot/analysis/similarity.hpp"
#include "polyscot/dataset/build.hpp"
#include "support.hpp"

using namespace polyscot;
using namespace polyscot::analysis;
using nlohmann::json;
using testsupport::fixture;

namespace {

std::vector<dataset::CotRecord> mock_records() {
  dataset::BuildConfig cfg;
  cfg.agent.backend = std::make_shared<agents::MockBackend>(42);
  return dataset::build_dataset(dataset::ingest_seed(fixture("seeds.jsonl")).samples, cfg).records;
}

std::vector<dataset::CotRecord> random_store(std::uint64_t seed) {
  std::mt19937_64 g(seed);
  testsupport::ScotGen gen(seed * 31 + 1);
  std::vector<dataset::CotRecord> out;
  std::size_t tasks = 2 + g() % 6;
  for (std::size_t t = 0; t < tasks; ++t)
    for (auto l : kAllLanguages) {
      dataset::CotRecord r;
      r.task_id = "t" + std::to_string(t);
      r.language = l;
      r.header.language = l;
      r.cot = gen.document();
      out.push_back(std::move(r));
    }
  return out;
}

scot::ScotDocument doc(const std::string& rel) { return scot::parse_scot(read_file(fixture(rel))); }

}  // namespace

TEST(Similarity, HandDerivedOracle) {
  json o = json::parse(read_file(fixture("similarity/oracle.json")));
  auto s = cot_similarity_breakdown(doc("similarity/a.txt"), doc("similarity/b.txt"));
  EXPECT_NEAR(s.token, o["token"].get<double>(), 1e-9);
  EXPECT_NEAR(s.structure, o["structure"].get<double>(), 1e-9);
  EXPECT_NEAR(s.value, o["value"].get<double>(), 1e-9);
}

TEST(Similarity, IdenticalIsOneAndWeightsNormalize) {
  auto a = doc("scot/valid/gcd.txt"), b = doc("scot/valid/fizzbuzz.txt");
  EXPECT_EQ(cot_similarity(a, a), 1.0);
  double s1 = cot_similarity(a, b, {1, 1}), s2 = cot_similarity(a, b, {3, 3});
  EXPECT_DOUBLE_EQ(s1, s2);
  EXPECT_DOUBLE_EQ(cot_similarity(a, b, {1, 0}), token_cosine(a, b));
  EXPECT_DOUBLE_EQ(cot_similarity(a, b, {0, 1}), structure_similarity(a, b));
  EXPECT_THROW(cot_similarity(a, b, {0, 0}), Error);
  EXPECT_THROW(cot_similarity(a, b, {-1, 2}), Error);
}

TEST(Similarity, OneToManyStoreIsAllOnes) {
  auto m = build_matrix(mock_records(), {kAllLanguages.begin(), kAllLanguages.end()}, {}, 4);
  ASSERT_EQ(m.cells.size(), 12u);
  for (auto& row : m.cells) {
    ASSERT_EQ(row.size(), 12u);
    for (double v : row) EXPECT_EQ(v, 1.0);
  }
}

TEST(Similarity, RandomStoresSymmetricUnitDiagonalBounded) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto m = build_matrix(random_store(seed), {kAllLanguages.begin(), kAllLanguages.end()}, {0.3, 0.7}, 4);
    for (std::size_t i = 0; i < 12; ++i) {
      EXPECT_EQ(m.cells[i][i], 1.0);
      for (std::size_t j = 0; j < 12; ++j) {
        EXPECT_EQ(m.cells[i][j], m.cells[j][i]);
        EXPECT_GE(m.cells[i][j], 0.0);
        EXPECT_LE(m.cells[i][j], 1.0);
      }
    }
  }
}

TEST(Similarity, NoSharedTasks) {
  auto recs = random_store(3);
  std::vector<dataset::CotRecord> split;
  for (auto& r : recs)
    if ((r.language == LanguageId::Go && r.task_id == "t0") || (r.language == LanguageId::Java && r.task_id == "t1"))
      split.push_back(r);
  EXPECT_THROW(build_matrix(split, {LanguageId::Go, LanguageId::Java}), NoSharedTasks);
}

TEST(Heatmap, CsvAndSvg) {
  auto m = build_matrix(random_store(5), {LanguageId::Python, LanguageId::Go});
  auto csv = heatmap_csv(m);
  EXPECT_EQ(csv.rfind("language,Go,Python\n", 0), 0u) << csv;
  EXPECT_EQ(text::split_lines(csv).size(), 3u);
  auto svg = heatmap_svg(m);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("1.00"), std::string::npos);
  EXPECT_EQ(ramp_color(0.0), "#ffffff");
  EXPECT_EQ(ramp_color(1.0), "#000000");
}

TEST(Rubric, FixtureMeansAtTwoDecimals) {
  auto scores = parse_rubric_csv(read_file(fixture("rubric.csv")));
  auto ms = aggregate_rubric(scores, "MSCoT");
  auto ct = aggregate_rubric(scores, "COTTON");
  EXPECT_EQ(ms.rows, 60u);
  EXPECT_EQ(text::fixed(ms.similarity, 2), "3.47");
  EXPECT_EQ(text::fixed(ms.naturalness, 2), "3.33");
  EXPECT_EQ(text::fixed(ms.educational_value, 2), "3.28");
  EXPECT_EQ(text::fixed(ct.similarity, 2), "2.78");
  EXPECT_EQ(text::fixed(ct.naturalness, 2), "2.57");
  EXPECT_EQ(text::fixed(ct.educational_value, 2), "2.50");
}

TEST(Rubric, SchemaAndEmpty) {
  EXPECT_THROW(parse_rubric_csv("rater,task,system\n"), RubricSchemaError);
  EXPECT_THROW(parse_rubric_csv("rater,task_id,system,similarity,naturalness,educational_value\nr,t,S,6,1,1\n"),
               RubricSchemaError);
  auto s = parse_rubric_csv("rater,task_id,system,similarity,naturalness,educational_value\nr,t,S,5,1,2\n");
  EXPECT_THROW(aggregate_rubric(s, "other"), RubricEmpty);
}
