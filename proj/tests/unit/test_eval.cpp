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

#include <cstdlib>
#include <random>

#include "polyscot/eval/metrics.hpp"
#include "polyscot/eval/protocol.hpp"
#include "polyscot/eval/report.hpp"
#include "support.hpp"

using namespace polyscot;
using namespace polyscot::eval;
using testsupport::fixture;
using testsupport::Scratch;

namespace {

CotProvider cots_from_fixture() {
  auto rows = testsupport::read_jsonl(fixture("eval/cots.jsonl"));
  auto map = std::make_shared<std::map<std::string, scot::ScotDocument>>();
  for (auto& r : rows) map->emplace(r["task_id"].get<std::string>(), scot::parse_scot(r["cot"].get<std::string>()));
  return [map](const BenchTask& t) -> std::optional<scot::ScotDocument> {
    auto it = map->find(t.task_id);
    if (it == map->end()) return std::nullopt;
    return it->second;
  };
}

// Pure executor: the code is the verdict.
RunResult by_token(LanguageId, const std::string& code, const std::string&) {
  RunResult r;
  r.status = code == "PASS" ? RunStatus::Pass : RunStatus::Fail;
  return r;
}

bool pgrep(const std::string& pattern) {
  std::string cmd = "pgrep -f " + testsupport::shell_quote(pattern) + " > /dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

std::size_t run_dirs(const fs::path& tmp) {
  std::size_t n = 0;
  for (auto& e : fs::directory_iterator(tmp)) n += e.path().filename().string().rfind("polyscot-run-", 0) == 0;
  return n;
}

}  // namespace

TEST(Protocol, ScriptedOracle) {
  auto tasks = parse_bench_jsonl(read_file(fixture("eval/bench.jsonl")));
  ASSERT_EQ(tasks.size(), 8u);
  ScriptedCodeBackend backend(json::parse(read_file(fixture("eval/script.json"))));
  EvalRun run;
  double cot = cot_pass_at_1(tasks, backend, cots_from_fixture(), sandbox_executor(default_runner_spec()), &run);
  EXPECT_EQ(cot, 87.5);
  EXPECT_EQ(run.overall_pass_at_1(), 75.0);
  EXPECT_EQ(run.phase2_generations, 2u);
  EXPECT_EQ(backend.phase2_calls(), 2u);
  EXPECT_EQ(backend.phase1_calls(), 8u);
  std::set<std::string> failed1, rescued;
  for (auto& e : run.ledger) {
    if (e.phase1 != RunStatus::Pass) failed1.insert(e.task_id);
    if (e.phase2 == RunStatus::Pass) rescued.insert(e.task_id);
  }
  EXPECT_EQ(failed1, (std::set<std::string>{"bench/2", "bench/5"}));
  EXPECT_EQ(rescued, (std::set<std::string>{"bench/5"}));
}

TEST(Protocol, LedgerKeepsInputOrderWithWorkers) {
  auto tasks = parse_bench_jsonl(read_file(fixture("eval/bench.jsonl")));
  ScriptedCodeBackend backend(json::parse(read_file(fixture("eval/script.json"))));
  ProtocolOptions opt;
  opt.workers = 4;
  auto run = run_protocol(tasks, backend, cots_from_fixture(), sandbox_executor(default_runner_spec()), opt);
  ASSERT_EQ(run.ledger.size(), tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) EXPECT_EQ(run.ledger[i].task_id, tasks[i].task_id);
}

TEST(Protocol, MonotoneOver100RandomBackends) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 40;
    std::vector<BenchTask> tasks;
    std::map<std::string, ScriptedCodeBackend::Script> scripts;
    for (std::size_t i = 0; i < n; ++i) {
      std::string id = "r/" + std::to_string(i);
      tasks.push_back({id, kAllLanguages[rng() % kAllLanguages.size()], "prompt " + id, "", "f"});
      ScriptedCodeBackend::Script s{rng() % 2 ? "PASS" : "FAIL", std::nullopt};
      if (rng() % 3) s.phase2 = rng() % 2 ? "PASS" : "FAIL";
      scripts.emplace(id, s);
    }
    ScriptedCodeBackend backend(scripts);
    CotProvider cots = [&](const BenchTask& t) -> std::optional<scot::ScotDocument> {
      if (t.task_id.back() == '7') return std::nullopt;
      return scot::ScotDocument{"x", "y", {scot::Step{"solve " + t.task_id}}};
    };
    auto run = run_protocol(tasks, backend, cots, by_token);
    EXPECT_GE(run.overall_cot_pass_at_1(), run.overall_pass_at_1());
    for (auto& [l, s] : run.per_language()) EXPECT_GE(s.cot_pass_at_1, s.pass_at_1);
    std::size_t fails = 0;
    for (auto& e : run.ledger) fails += e.phase1 != RunStatus::Pass;
    EXPECT_EQ(run.phase2_generations, fails);
  }
}

TEST(Protocol, BackendErrorAbortsWithPartialLedger) {
  std::vector<BenchTask> tasks{{"a", LanguageId::Python, "p", "", "f"}, {"b", LanguageId::Python, "p", "", "f"}};
  ScriptedCodeBackend backend(std::map<std::string, ScriptedCodeBackend::Script>{{"a", {"PASS", std::nullopt}}});
  try {
    run_protocol(tasks, backend, nullptr, by_token);
    FAIL();
  } catch (const EvalAborted& e) {
    EXPECT_FALSE(e.partial().complete);
    EXPECT_EQ(e.partial().ledger.size(), 1u);
  }
}

TEST(Protocol, BenchSchema) {
  EXPECT_THROW(parse_bench_jsonl("{\"task_id\": \"x\"}\n"), BenchSchemaError);
  EXPECT_THROW(parse_bench_jsonl("{\"task_id\":\"x\",\"language\":\"Python\",\"prompt\":\"\",\"tests\":\"assert g()\","
                                 "\"entry_point\":\"f\"}\n"),
               BenchSchemaError);
}

TEST(Protocol, ExtractCode) {
  EXPECT_EQ(extract_code("text\n```python\nx = 1\n```\nmore"), "x = 1");
  EXPECT_EQ(extract_code("x = 2"), "x = 2");
}

TEST(Metrics, PassAtOneAndAggregate) {
  std::vector<RunResult> rs(4);
  rs[0].status = rs[1].status = RunStatus::Pass;
  rs[2].status = RunStatus::Timeout;
  rs[3].status = RunStatus::Fail;
  EXPECT_EQ(pass_at_1(rs), 50.0);
  EXPECT_THROW(pass_at_1({}), EmptyInput);
  auto a = aggregate({{LanguageId::Go, 50.0}, {LanguageId::Java, 70.0}}, 55.0);
  EXPECT_DOUBLE_EQ(a.average, 60.0);
  EXPECT_DOUBLE_EQ(*a.delta, 5.0);
  EXPECT_THROW(aggregate({{LanguageId::Go, 50.0}}, std::nullopt, true), MissingLanguage);
}

TEST(Metrics, PublishedTableParity) {
  auto rows = parse_table_csv(read_file(std::string(POLYSCOT_SOURCE_DIR) + "/data/table2_published.csv"));
  EXPECT_EQ(rows.size(), 12u);
  auto checks = table_parity(rows);
  std::size_t deltas = 0;
  for (auto& c : checks) {
    EXPECT_TRUE(c.ok) << c.label << " published " << c.published << " recomputed " << c.recomputed;
    deltas += c.label.find("delta") != std::string::npos;
  }
  EXPECT_EQ(deltas, 10u);
}

TEST(Metrics, ParityCatchesOffByOneCent) {
  auto rows = parse_table_csv(read_file(std::string(POLYSCOT_SOURCE_DIR) + "/data/table2_published.csv"));
  rows[0].avg += 1;
  auto checks = table_parity(rows);
  EXPECT_FALSE(checks[0].ok);
}

TEST(Metrics, Hundredths) {
  EXPECT_EQ(to_hundredths("+13.12"), 1312);
  EXPECT_EQ(to_hundredths("-0.5"), -50);
  EXPECT_EQ(to_hundredths("7"), 700);
  EXPECT_THROW(to_hundredths("1.234"), Error);
  EXPECT_EQ(hundredths_str(-5), "-0.05");
}

TEST(Report, CsvAndJsonCarryBothMetrics) {
  EvalRun run;
  run.ledger = {{"a", LanguageId::Python, RunStatus::Pass, std::nullopt},
                {"b", LanguageId::Python, RunStatus::Fail, RunStatus::Pass},
                {"c", LanguageId::Go, RunStatus::Fail, RunStatus::Fail},
                {"d", LanguageId::Go, RunStatus::Skipped, std::nullopt}};
  auto rep = make_report(run);
  EXPECT_DOUBLE_EQ(rep.per_language.at(LanguageId::Python).cot_pass_at_1, 100.0);
  EXPECT_EQ(rep.per_language.at(LanguageId::Go).skipped, 1u);
  EXPECT_DOUBLE_EQ(rep.baseline_avg, 25.0);
  EXPECT_DOUBLE_EQ(rep.avg, 50.0);
  auto j = to_json(rep);
  EXPECT_TRUE(j.is_object());
  EXPECT_NE(to_csv(rep).find("+25.00"), std::string::npos) << to_csv(rep);
}

class SandboxTimeout : public ::testing::TestWithParam<std::pair<LanguageId, std::string>> {};

TEST_P(SandboxTimeout, KillsGroupAndCleansUp) {
  auto [lang, code] = GetParam();
  auto spec = default_runner_spec();
  if (!toolchain_available(spec.runners.at(lang))) GTEST_SKIP() << "no toolchain";
  spec.runners.at(lang).timeout_seconds = 1;
  Scratch tmp("sbx");
  const char* old = std::getenv("TMPDIR");
  std::string saved = old ? old : "";
  ::setenv("TMPDIR", tmp.path().c_str(), 1);
  auto t0 = std::chrono::steady_clock::now();
  auto r = run_candidate(lang, code, "", spec);
  double took = testsupport::seconds_since(t0);
  if (old) ::setenv("TMPDIR", saved.c_str(), 1);
  else ::unsetenv("TMPDIR");
  EXPECT_EQ(r.status, RunStatus::Timeout) << r.stderr_text;
  EXPECT_LE(took, 1.0 + 2.0);
  EXPECT_EQ(run_dirs(tmp.path()), 0u);
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  EXPECT_FALSE(pgrep("slee[p] 41.5"));
}

INSTANTIATE_TEST_SUITE_P(
    Runtimes, SandboxTimeout,
    ::testing::Values(
        std::make_pair(LanguageId::Python,
                       std::string("import subprocess\nsubprocess.Popen(['sleep', '41.5'])\nwhile True:\n    pass")),
        std::make_pair(LanguageId::JavaScript,
                       std::string("require('child_process').spawn('sleep', ['41.5']);\nfor (;;) {}")),
        std::make_pair(LanguageId::Perl, std::string("system('sleep 41.5 &');\nwhile (1) {}"))),
    [](const auto& info) { return std::string(language_name(info.param.first)); });

TEST(Sandbox, PassFailAndMissingToolchain) {
  auto spec = default_runner_spec();
  if (!toolchain_available(spec.runners.at(LanguageId::Python))) GTEST_SKIP();
  EXPECT_EQ(run_candidate(LanguageId::Python, "def f():\n    return 1", "assert f() == 1", spec).status, RunStatus::Pass);
  EXPECT_EQ(run_candidate(LanguageId::Python, "def f():\n    return 2", "assert f() == 1", spec).status, RunStatus::Fail);
  spec.runners.at(LanguageId::Python).run = "no-such-interpreter-xyz {src}";
  EXPECT_EQ(run_candidate(LanguageId::Python, "x", "", spec).status, RunStatus::Skipped);
}

TEST(Sandbox, EnvironmentIsFiltered) {
  auto spec = default_runner_spec();
  if (!toolchain_available(spec.runners.at(LanguageId::Python))) GTEST_SKIP();
  ::setenv("MSCOT_API_KEY", "sk-do-not-leak", 1);
  auto r = run_candidate(LanguageId::Python, "import os", "assert 'MSCOT_API_KEY' not in os.environ", spec);
  ::unsetenv("MSCOT_API_KEY");
  EXPECT_EQ(r.status, RunStatus::Pass) << r.stderr_text;
}
