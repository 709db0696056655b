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

// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// fail. Runtime limits are part of each check.

#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>

#include "polyscot/agents/mock.hpp"
#include "polyscot/analysis/rubric.hpp"
#include "polyscot/analysis/similarity.hpp"
#include "polyscot/dataset/build.hpp"
#include "polyscot/eval/metrics.hpp"
#include "polyscot/eval/protocol.hpp"
#include "polyscot/lora/adapter.hpp"
#include "rank_oracle.hpp"
#include "support.hpp"

using namespace polyscot;
namespace fs = std::filesystem;
using nlohmann::json;
using testsupport::fixture;
using testsupport::Scratch;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
  void fail(const std::string& why) {
    if (ok) note = why;
    ok = false;
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

using Check = std::function<void(Outcome&)>;

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const Check& fn) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    fn(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double took = testsupport::seconds_since(t0);
  if (o.ok && took >= limit_s) o.fail("took " + text::fixed(took, 2) + "s, limit " + text::fixed(limit_s, 0) + "s");
  std::printf("%s %2d %-34s %7.2fs%s%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), took, o.note.empty() ? "" : "  ",
              o.note.c_str());
  std::fflush(stdout);
  failures += !o.ok;
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path().string());
  return out;
}

std::optional<scot::ScotErrorKind> rejection(const std::string& text) {
  try {
    auto r = scot::validate(scot::parse_scot(text));
    if (r.empty()) return std::nullopt;
    return r.front().kind;
  } catch (const scot::ScotError& e) {
    return e.kind();
  }
}

// Table arithmetic.
void c1(Outcome& o) {
  auto rows = eval::parse_table_csv(read_file(std::string(POLYSCOT_SOURCE_DIR) + "/data/table2_published.csv"));
  o.require(rows.size() == 12, "expected 12 rows, got " + std::to_string(rows.size()));
  std::size_t avgs = 0, deltas = 0;
  for (auto& c : eval::table_parity(rows)) {
    o.require(c.ok, c.label + ": published " + c.published + ", recomputed " + c.recomputed);
    (c.label.find(" delta") != std::string::npos ? deltas : avgs)++;
  }
  o.require(avgs == 12 && deltas == 10, "expected 12 averages and 10 deltas");
  bool anchor = false;
  for (auto& r : rows) anchor |= r.model == "DeepSeek-Coder" && r.method == "MSCoT" && r.delta == 1312;
  o.require(anchor, "DeepSeek-Coder MSCoT delta +13.12 not found");
}

// CT example.
void c2(Outcome& o) {
  agents::AgentConfig cfg;
  cfg.backend = std::make_shared<agents::MockBackend>(42);
  auto src = sig::parse_header(LanguageId::Python,
                               "def below_zero(operations) -> bool:\n    ''' You're given a list of (more information)\n    '''");
  auto ts = agents::ct_translate(src, LanguageId::TypeScript, cfg);
  std::string want =
      "/**\n* You're an expert TypeScript programmer\n* You're given a list of (more information)\n*/\n"
      "const below_zero = function (operations): boolean {";
  o.require(text::collapse_ws(ts.raw_text) == text::collapse_ws(want), "got:\n" + ts.raw_text);
}

// Signature corpus.
void c3(Outcome& o) {
  auto rows = testsupport::read_jsonl(fixture("headers.jsonl"));
  std::map<LanguageId, int> per;
  std::size_t ok = 0;
  for (auto& j : rows) {
    LanguageId l = parse_language(j["language"].get<std::string>());
    ++per[l];
    try {
      auto a = sig::parse_header(l, j["source"].get<std::string>());
      auto b = sig::parse_header(l, sig::render_header(l, a.docstring, a.signature));
      if (a.signature == b.signature && a.docstring == b.docstring) ++ok;
      else o.fail(j["id"].get<std::string>() + ": AST changed after render");
    } catch (const std::exception& e) {
      o.fail(j["id"].get<std::string>() + ": " + e.what());
    }
  }
  o.require(rows.size() >= 60, "only " + std::to_string(rows.size()) + " headers");
  for (auto l : kAllLanguages) o.require(per[l] >= 5, std::string(language_name(l)) + " has fewer than 5 headers");
  o.note = o.ok ? std::to_string(ok) + "/" + std::to_string(rows.size()) + " round-trip" : o.note;
}

// SCoT grammar.
void c4(Outcome& o) {
  std::size_t valid = 0, invalid = 0;
  for (auto& e : fs::directory_iterator(fixture("scot/valid"))) {
    auto text = read_file(e.path().string());
    auto k = rejection(text);
    o.require(!k, e.path().filename().string() + " rejected");
    ++valid;
  }
  json expected = json::parse(read_file(fixture("scot/invalid/expected.json")));
  for (auto& [file, kind] : expected.items()) {
    auto k = rejection(read_file(fixture("scot/invalid/" + file)));
    o.require(k && scot::ScotErrorNames::name(*k) == kind.get<std::string>(), file + " not rejected as " + kind.get<std::string>());
    ++invalid;
  }
  o.require(invalid >= 10, "fewer than 10 mutation fixtures");
  testsupport::ScotGen gen(20240601);
  for (int i = 0; i < 1000 && o.ok; ++i) {
    auto doc = gen.document();
    auto parsed = scot::parse_scot(gen.noisy_text(doc));
    std::string once = scot::render_scot(parsed);
    o.require(parsed == doc && scot::render_scot(scot::parse_scot(once)) == once,
              "idempotence broken on generated doc " + std::to_string(i));
  }
  if (o.ok) o.note = std::to_string(valid) + " valid, " + std::to_string(invalid) + " mutations, 1000 generated";
}

// Mock build determinism.
void c5(Outcome& o) {
  Scratch a("acc5a"), b("acc5b");
  auto corpus = dataset::ingest_seed(fixture("seeds.jsonl"));
  o.require(corpus.samples.size() == 20, "seed fixture is not 20 seeds");
  std::set<std::string> keep;
  for (auto& l : text::split_lines(read_file(fixture("seeds_keep.txt"))))
    if (!text::trim(l).empty()) keep.insert(std::string(text::trim(l)));
  for (const Scratch* dir : {&a, &b}) {
    dataset::BuildConfig cfg;
    cfg.agent.backend = std::make_shared<agents::MockBackend>(42);
    auto res = dataset::build_dataset(corpus.samples, cfg);
    std::set<std::string> got;
    for (auto& r : res.records) got.insert(r.task_id);
    o.require(res.records.size() == 204, "got " + std::to_string(res.records.size()) + " records");
    o.require(got == keep, "keep-set differs from the frozen list");
    dataset::write_store(dir->path(), res.records, res.rejects,
                         dataset::manifest_for(res, cfg.languages, corpus.sha256, "acceptance"));
    auto m = dataset::verify_manifest(dir->path());
    o.require(m.total == 204, "manifest total " + std::to_string(m.total));
  }
  o.require(tree_bytes(a.path()) == tree_bytes(b.path()), "two builds differ");
}

// Two-phase protocol.
void c6(Outcome& o) {
  auto tasks = eval::parse_bench_jsonl(read_file(fixture("eval/bench.jsonl")));
  eval::ScriptedCodeBackend backend(json::parse(read_file(fixture("eval/script.json"))));
  std::map<std::string, scot::ScotDocument> cots;
  for (auto& r : testsupport::read_jsonl(fixture("eval/cots.jsonl")))
    cots.emplace(r["task_id"].get<std::string>(), scot::parse_scot(r["cot"].get<std::string>()));
  eval::CotProvider provider = [&](const eval::BenchTask& t) -> std::optional<scot::ScotDocument> {
    auto it = cots.find(t.task_id);
    return it == cots.end() ? std::nullopt : std::optional(it->second);
  };
  eval::EvalRun run;
  double v = eval::cot_pass_at_1(tasks, backend, provider, eval::sandbox_executor(eval::default_runner_spec()), &run);
  o.require(tasks.size() == 8, "bench is not 8 tasks");
  o.require(v == 87.5, "cot_pass_at_1 = " + text::fixed(v, 4));
  o.require(run.phase2_generations == 2, "phase-2 generations = " + std::to_string(run.phase2_generations));

  std::mt19937_64 rng(99);
  auto token = [](LanguageId, const std::string& code, const std::string&) {
    eval::RunResult r;
    r.status = code == "PASS" ? eval::RunStatus::Pass : eval::RunStatus::Fail;
    return r;
  };
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng() % 40;
    std::vector<eval::BenchTask> ts;
    std::map<std::string, eval::ScriptedCodeBackend::Script> scripts;
    for (std::size_t i = 0; i < n; ++i) {
      std::string id = "r/" + std::to_string(i);
      ts.push_back({id, kAllLanguages[rng() % 12], "p", "", "f"});
      eval::ScriptedCodeBackend::Script s{rng() % 2 ? "PASS" : "FAIL", std::nullopt};
      if (rng() % 3) s.phase2 = rng() % 2 ? "PASS" : "FAIL";
      scripts.emplace(id, s);
    }
    eval::ScriptedCodeBackend sb(scripts);
    auto r = eval::run_protocol(ts, sb, nullptr, token);
    o.require(r.overall_cot_pass_at_1() >= r.overall_pass_at_1(), "monotonicity broken at trial " + std::to_string(trial));
  }
}

// Sandbox timeouts.
void c7(Outcome& o) {
  const std::map<LanguageId, std::string> loops{
      {LanguageId::Python, "import subprocess\nsubprocess.Popen(['sleep', '43.25'])\nwhile True:\n    pass"},
      {LanguageId::JavaScript, "require('child_process').spawn('sleep', ['43.25']);\nfor (;;) {}"},
      {LanguageId::TypeScript, "while (true) {}"},
      {LanguageId::Perl, "system('sleep 43.25 &');\nwhile (1) {}"},
      {LanguageId::Ruby, "loop {}"},
      {LanguageId::PHP, "<?php\nwhile (true) {}"},
      {LanguageId::Go, "package main\nfunc main() { for {} }"},
      {LanguageId::Java, "public class Main { public static void main(String[] a) { while (true) {} } }"},
      {LanguageId::CSharp, "class Main { static void Main() { while (true) {} } }"},
      {LanguageId::Kotlin, "fun main() { while (true) {} }"},
      {LanguageId::Scala, "object Main { def main(a: Array[String]): Unit = while (true) {} }"},
      {LanguageId::Swift, "while true {}"}};
  Scratch tmp("acc7");
  ::setenv("TMPDIR", tmp.path().c_str(), 1);
  auto spec = eval::default_runner_spec();
  std::vector<std::string> checked, skipped;
  for (auto& [lang, code] : loops) {
    auto& runner = spec.runners.at(lang);
    if (!eval::toolchain_available(runner)) {
      skipped.push_back(std::string(language_name(lang)));
      continue;
    }
    runner.timeout_seconds = 2;
    auto t0 = std::chrono::steady_clock::now();
    auto r = eval::run_candidate(lang, code, "", spec);
    double took = testsupport::seconds_since(t0);
    std::string name(language_name(lang));
    o.require(r.status == eval::RunStatus::Timeout, name + ": status " + std::string(eval::run_status_name(r.status)));
    o.require(took <= runner.timeout_seconds + 2.0, name + ": took " + text::fixed(took, 2) + "s");
    checked.push_back(name);
  }
  ::unsetenv("TMPDIR");
  std::size_t leftovers = 0;
  for (auto& e : fs::directory_iterator(tmp.path())) leftovers += e.path().filename().string().rfind("polyscot-run-", 0) == 0;
  o.require(leftovers == 0, std::to_string(leftovers) + " temp dirs left behind");
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  o.require(std::system("pgrep -f 'slee[p] 43.25' > /dev/null 2>&1") != 0, "orphan process survived");
  o.require(checked.size() >= 2, "fewer than two runtimes available");
  if (o.ok) o.note = "checked " + text::join(checked, ",") + "; skipped " + std::to_string(skipped.size());
}

// LoRA algebra.
void c8(Outcome& o) {
  std::mt19937_64 g(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  auto rnd = [&](long r, long c) {
    lora::DenseMatrix m(r, c);
    for (long i = 0; i < r; ++i)
      for (long j = 0; j < c; ++j) m(i, j) = n(g);
    return m;
  };
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    long d = 2 + static_cast<long>(g() % 48), k = 2 + static_cast<long>(g() % 48);
    long r = 1 + static_cast<long>(g() % static_cast<unsigned long>(std::min(d, k) - 1));
    auto a = lora::init_adapter(d, k, r, g(), 0.5);
    auto W0 = rnd(d, k);
    auto M = lora::merge(a, W0);
    o.require(std::memcmp(M.data(), W0.data(), sizeof(double) * static_cast<std::size_t>(W0.size())) == 0,
              "zero-onset merge is not bitwise W0");
    a.B = rnd(d, r);
    auto X = rnd(k, 1 + static_cast<long>(g() % 8));
    worst = std::max(worst, (lora::forward(a, W0, X) - lora::merge(a, W0) * X).cwiseAbs().maxCoeff());
    o.require(oracle::rank(a.B * a.A, 1e-9) <= r, "rank(BA) > r");
  }
  o.require(worst <= 1e-9, "forward vs merge max-abs " + std::to_string(worst));
  auto h = lora::reference_hyperparams();
  o.require(h.lora_r == 32 && h.lora_alpha == 16 && h.seed == 42 && h.lr == 2e-4, "hyper-parameters differ");
  if (o.ok) o.note = "max-abs " + std::to_string(worst);
}

// Similarity matrix and rubric.
void c9(Outcome& o) {
  dataset::BuildConfig cfg;
  cfg.agent.backend = std::make_shared<agents::MockBackend>(42);
  auto res = dataset::build_dataset(dataset::ingest_seed(fixture("seeds.jsonl")).samples, cfg);
  std::vector<LanguageId> all(kAllLanguages.begin(), kAllLanguages.end());
  auto m = analysis::build_matrix(res.records, all, {}, 4);
  for (auto& row : m.cells)
    for (double v : row) o.require(v == 1.0, "one-to-many store is not all ones");
  o.require(m.cells.size() == 12, "matrix is not 12x12");

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    testsupport::ScotGen gen(seed);
    std::vector<dataset::CotRecord> recs;
    for (int t = 0; t < 4; ++t)
      for (auto l : all) {
        dataset::CotRecord r;
        r.task_id = "t" + std::to_string(t);
        r.language = l;
        r.cot = gen.document();
        recs.push_back(std::move(r));
      }
    auto rm = analysis::build_matrix(recs, all, {}, 4);
    for (std::size_t i = 0; i < 12; ++i) {
      o.require(rm.cells[i][i] == 1.0, "diagonal not 1");
      for (std::size_t j = 0; j < 12; ++j) o.require(rm.cells[i][j] == rm.cells[j][i], "matrix not symmetric");
    }
  }

  auto scores = analysis::parse_rubric_csv(read_file(fixture("rubric.csv")));
  auto fmt = [](const analysis::RubricMeans& r) {
    return text::fixed(r.similarity, 2) + "/" + text::fixed(r.naturalness, 2) + "/" + text::fixed(r.educational_value, 2);
  };
  std::string ms = fmt(analysis::aggregate_rubric(scores, "MSCoT"));
  std::string ct = fmt(analysis::aggregate_rubric(scores, "COTTON"));
  o.require(ms == "3.47/3.33/3.28", "MSCoT means " + ms);
  o.require(ct == "2.78/2.57/2.50", "COTTON means " + ct);
  if (o.ok) o.note = "MSCoT " + ms + ", COTTON " + ct;
}

// Documentation and the live path.
void c10(Outcome& o) {
  std::string readme = read_file(std::string(POLYSCOT_SOURCE_DIR) + "/README.md");
  o.require(readme.find("not desk-reproducible") != std::string::npos, "README lacks the non-reproducibility note");
  o.require(readme.find("--live") != std::string::npos && readme.find("MSCOT_API_KEY") != std::string::npos,
            "README does not document --live");
  Scratch s("acc10");
  write_file(s / "c.json", R"({"agents": {"endpoint": "http://127.0.0.1:1/v1", "model": "m"}})");
  auto r = testsupport::run_cli(
      {"-c", s / "c.json", "build", "--live", "--seed-file", fixture("seeds.jsonl"), "--out", s / "store"},
      "env -u MSCOT_API_KEY");
  o.require(r.rc == 2, "--live without a key exited " + std::to_string(r.rc));
}

}  // namespace

int main() {
  criterion(1, "published-table arithmetic", 1, c1);
  criterion(2, "CT below_zero example", 1, c2);
  criterion(3, "signature corpus round-trip", 5, c3);
  criterion(4, "SCoT grammar suite", 30, c4);
  criterion(5, "mock build determinism", 60, c5);
  criterion(6, "two-phase protocol oracle", 30, c6);
  criterion(7, "sandbox timeout and cleanup", 120, c7);
  criterion(8, "LoRA properties", 10, c8);
  criterion(9, "similarity matrix and rubric", 30, c9);
  criterion(10, "non-reproducibility note, --live", 5, c10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
