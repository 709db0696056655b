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

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyscot/agents/backend.hpp"
#include "polyscot/agents/prompts.hpp"
#include "polyscot/core/parallel.hpp"
#include "polyscot/eval/metrics.hpp"
#include "polyscot/eval/sandbox.hpp"
#include "polyscot/scot/grammar.hpp"

namespace polyscot::eval {

using nlohmann::json;

struct BenchTask {
  std::string task_id;
  LanguageId language = LanguageId::Python;
  std::string prompt;
  std::string tests;
  std::string entry_point;
};

class BenchSchemaError : public Error {
 public:
  using Error::Error;
};

inline std::vector<BenchTask> parse_bench_jsonl(std::string_view content) {
  std::vector<BenchTask> out;
  std::vector<std::string> problems;
  auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    std::string where = "line " + std::to_string(i + 1);
    try {
      json j = json::parse(lines[i]);
      BenchTask t;
      t.task_id = j.at("task_id").get<std::string>();
      t.language = parse_language(j.at("language").get<std::string>());
      t.prompt = j.at("prompt").get<std::string>();
      t.tests = j.at("tests").get<std::string>();
      t.entry_point = j.at("entry_point").get<std::string>();
      if (!text::contains_word(t.tests, t.entry_point)) problems.push_back(where + ": tests never mention entry_point");
      else out.push_back(std::move(t));
    } catch (const std::exception& e) {
      problems.push_back(where + ": " + e.what());
    }
  }
  if (!problems.empty()) throw BenchSchemaError("benchmark schema: " + text::join(problems, "; "));
  return out;
}

// ---- code generation ----

// Content of the first ``` fenced block, else the raw reply.
inline std::string extract_code(std::string_view reply) {
  std::size_t open = reply.find("```");
  if (open == std::string_view::npos) return std::string(reply);
  std::size_t nl = reply.find('\n', open);
  if (nl == std::string_view::npos) return std::string(reply);
  std::size_t close = reply.find("```", nl + 1);
  std::string_view body = reply.substr(nl + 1, close == std::string_view::npos ? std::string_view::npos : close - nl - 1);
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.remove_suffix(1);
  return std::string(body);
}

// Greedy decoding; with a CoT the user turn is prompt + "\n" + rendered CoT.
inline std::string generate_code(agents::ChatBackend& backend, const std::string& prompt,
                                 const std::optional<scot::ScotDocument>& cot, const std::string& key = {}) {
  agents::ChatRequest req;
  req.system = std::string(agents::templates::kRole);
  req.user = cot ? prompt + "\n" + scot::render_scot(*cot) : prompt;
  req.decoding.temperature = 0.0;
  req.key = key;
  return extract_code(backend.complete(req));
}

inline bool carries_cot(std::string_view user) {
  return user.find(scot::kPreamble) != std::string_view::npos;
}

// Replays committed code per task: {"<task_id>": {"phase1": code, "phase2": code}}.
// The phase is read off the request: a CoT in the user turn means phase 2.
class ScriptedCodeBackend : public agents::ChatBackend {
 public:
  struct Script {
    std::string phase1;
    std::optional<std::string> phase2;
  };
  explicit ScriptedCodeBackend(std::map<std::string, Script> scripts) : scripts_(std::move(scripts)) {}
  explicit ScriptedCodeBackend(const json& j) : scripts_(parse(j)) {}

  static std::map<std::string, Script> parse(const json& j) {
    std::map<std::string, Script> s;
    for (auto& [id, v] : j.items()) {
      Script sc{v.at("phase1").get<std::string>(), std::nullopt};
      if (v.contains("phase2") && !v["phase2"].is_null()) sc.phase2 = v["phase2"].get<std::string>();
      s.emplace(id, std::move(sc));
    }
    return s;
  }

  std::string complete(const agents::ChatRequest& req) override {
    auto it = scripts_.find(req.key);
    if (it == scripts_.end()) throw agents::BackendError("scripted backend: no script for '" + req.key + "'");
    bool phase2 = carries_cot(req.user);
    ++(phase2 ? phase2_calls_ : phase1_calls_);
    return "```\n" + (phase2 && it->second.phase2 ? *it->second.phase2 : it->second.phase1) + "\n```";
  }
  std::string kind() const override { return "scripted"; }

  std::size_t phase1_calls() const { return phase1_calls_; }
  std::size_t phase2_calls() const { return phase2_calls_; }

 private:
  std::map<std::string, Script> scripts_;
  std::atomic<std::size_t> phase1_calls_{0};
  std::atomic<std::size_t> phase2_calls_{0};
};

// ---- two-phase protocol ----

using Executor = std::function<RunResult(LanguageId, const std::string& code, const std::string& tests)>;
using CotProvider = std::function<std::optional<scot::ScotDocument>(const BenchTask&)>;

inline Executor sandbox_executor(RunnerSpec spec, const std::atomic<bool>* cancel = nullptr) {
  return [spec = std::move(spec), cancel](LanguageId l, const std::string& code, const std::string& tests) {
    return run_candidate(l, code, tests, spec, cancel);
  };
}

struct LedgerEntry {
  std::string task_id;
  LanguageId language = LanguageId::Python;
  RunStatus phase1 = RunStatus::Skipped;
  std::optional<RunStatus> phase2;
  bool phase2_without_cot = false;

  bool passed() const { return phase1 == RunStatus::Pass || phase2 == RunStatus::Pass; }
  bool skipped() const { return phase1 == RunStatus::Skipped; }
};

inline json to_json(const LedgerEntry& e) {
  return {{"task_id", e.task_id},
          {"language", language_name(e.language)},
          {"phase1", run_status_name(e.phase1)},
          {"phase2", e.phase2 ? json(run_status_name(*e.phase2)) : json(nullptr)},
          {"passed", e.passed()}};
}

struct LanguageScore {
  std::size_t tasks = 0;  // non-skipped
  std::size_t skipped = 0;
  double pass_at_1 = 0.0;
  double cot_pass_at_1 = 0.0;
};

struct EvalRun {
  std::vector<LedgerEntry> ledger;  // input order
  std::size_t phase2_generations = 0;
  bool complete = true;

  std::map<LanguageId, LanguageScore> per_language() const {
    std::map<LanguageId, std::vector<const LedgerEntry*>> by;
    std::map<LanguageId, LanguageScore> out;
    for (const auto& e : ledger) {
      auto& s = out[e.language];
      if (e.skipped()) ++s.skipped;
      else by[e.language].push_back(&e);
    }
    for (auto& [l, es] : by) {
      auto& s = out[l];
      s.tasks = es.size();
      std::size_t p1 = 0, u = 0;
      for (auto* e : es) {
        p1 += e->phase1 == RunStatus::Pass;
        u += e->passed();
      }
      s.pass_at_1 = 100.0 * static_cast<double>(p1) / static_cast<double>(s.tasks);
      s.cot_pass_at_1 = 100.0 * static_cast<double>(u) / static_cast<double>(s.tasks);
    }
    return out;
  }

  double overall_pass_at_1() const { return overall(false); }
  double overall_cot_pass_at_1() const { return overall(true); }

 private:
  double overall(bool with_cot) const {
    std::size_t n = 0, k = 0;
    for (const auto& e : ledger) {
      if (e.skipped()) continue;
      ++n;
      k += with_cot ? e.passed() : e.phase1 == RunStatus::Pass;
    }
    if (n == 0) throw EmptyInput("EmptyInput: every task was skipped");
    return 100.0 * static_cast<double>(k) / static_cast<double>(n);
  }
};

class EvalAborted : public Error {
 public:
  EvalAborted(const std::string& why, EvalRun partial) : Error("EvalAborted: " + why), partial_(std::move(partial)) {}
  const EvalRun& partial() const noexcept { return partial_; }

 private:
  EvalRun partial_;
};

struct ProtocolOptions {
  std::size_t workers = 1;
  const std::atomic<bool>* cancel = nullptr;
  // Called once per finished task, in input order, from the calling thread.
  std::function<void(const LedgerEntry&)> on_entry;
};

// Phase 1 generates from the prompt alone; only failures get phase 2 with the
// CoT appended. A task counts if it passes in either phase.
inline EvalRun run_protocol(const std::vector<BenchTask>& tasks, agents::ChatBackend& backend,
                            const CotProvider& cots, const Executor& exec, const ProtocolOptions& opt = {}) {
  std::vector<std::optional<LedgerEntry>> slots(tasks.size());
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> phase2{0};
  std::string first_error;
  std::mutex err_mu;
  std::atomic<bool> cancelled{false};
  parallel_for(
      tasks.size(), opt.workers,
      [&](std::size_t i) {
        if (opt.cancel && opt.cancel->load()) {
          cancelled = true;
          stop = true;
          return;
        }
        const BenchTask& t = tasks[i];
        LedgerEntry e{t.task_id, t.language, RunStatus::Skipped, std::nullopt};
        try {
          std::string code = generate_code(backend, t.prompt, std::nullopt, t.task_id);
          e.phase1 = exec(t.language, code, t.tests).status;
          if (e.phase1 != RunStatus::Pass && e.phase1 != RunStatus::Skipped) {
            auto cot = cots ? cots(t) : std::nullopt;
            e.phase2_without_cot = !cot;
            std::string code2 = generate_code(backend, t.prompt, cot, t.task_id);
            ++phase2;
            e.phase2 = exec(t.language, code2, t.tests).status;
          }
        } catch (const agents::BackendError& ex) {
          std::lock_guard lock(err_mu);
          if (first_error.empty()) first_error = t.task_id + ": " + ex.what();
          stop = true;
          return;
        }
        slots[i] = std::move(e);
      },
      &stop);

  EvalRun run;
  run.phase2_generations = phase2.load();
  for (auto& s : slots) {
    if (!s) {
      run.complete = false;
      continue;
    }
    if (opt.on_entry) opt.on_entry(*s);
    run.ledger.push_back(std::move(*s));
  }
  if (!first_error.empty()) throw EvalAborted(first_error, std::move(run));
  if (cancelled) throw EvalAborted("interrupted", std::move(run));
  return run;
}

// Union-semantics CoT-Pass@1 over non-skipped tasks.
inline double cot_pass_at_1(const std::vector<BenchTask>& tasks, agents::ChatBackend& backend, const CotProvider& cots,
                            const Executor& exec, EvalRun* run_out = nullptr) {
  EvalRun run = run_protocol(tasks, backend, cots, exec);
  double v = run.overall_cot_pass_at_1();
  if (run_out) *run_out = std::move(run);
  return v;
}

}  // namespace polyscot::eval
