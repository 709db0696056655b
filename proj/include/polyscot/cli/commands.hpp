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
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyscot/agents/agents.hpp"
#include "polyscot/agents/mock.hpp"
#include "polyscot/agents/remote.hpp"
#include "polyscot/analysis/rubric.hpp"
#include "polyscot/analysis/similarity.hpp"
#include "polyscot/cli/config.hpp"
#include "polyscot/dataset/build.hpp"
#include "polyscot/dataset/export.hpp"
#include "polyscot/dataset/seed.hpp"
#include "polyscot/dataset/store.hpp"
#include "polyscot/eval/metrics.hpp"
#include "polyscot/eval/protocol.hpp"
#include "polyscot/eval/report.hpp"
#include "polyscot/scot/grammar.hpp"
#include "polyscot/sig/header.hpp"

namespace polyscot::cli {

namespace fs = std::filesystem;

inline constexpr int kOk = 0;
inline constexpr int kDomainFailure = 1;
inline constexpr int kUsageError = 2;

struct Io {
  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
  const std::atomic<bool>* cancel = nullptr;
};

namespace detail {

// Flag wins over config; empty when neither is set.
inline std::string pick(const Config& c, const std::string& flag, const std::string& configured) {
  return flag.empty() ? c.resolve(configured) : flag;
}

inline bool need_file(const Io& io, const std::string& what, const std::string& path) {
  if (path.empty()) {
    io.err << "error: no " << what << " given (flag or config)\n";
    return false;
  }
  if (!fs::exists(path)) {
    io.err << "error: " << what << " not found: " << path << "\n";
    return false;
  }
  return true;
}

inline std::shared_ptr<agents::ChatBackend> remote_backend(const std::string& endpoint, const std::string& model,
                                                           const std::string& transcript) {
  if (endpoint.empty()) throw ConfigError("live backend needs an endpoint in the config");
  agents::RemoteOptions o;
  o.base_url = endpoint;
  o.model = model;
  o.transcript_path = transcript;
  return std::make_shared<agents::RemoteEndpoint>(std::move(o));
}

inline std::string summary_line(const dataset::DatasetManifest& m) {
  std::string s = "records " + std::to_string(m.total) + " (" + std::to_string(m.cot_digests.size()) + " tasks x " +
                  std::to_string(m.languages.size()) + " languages), seeds " + std::to_string(m.seed_pool) +
                  ", rejected " + std::to_string(m.rejected);
  return s;
}

inline void print_counts(std::ostream& out, const dataset::DatasetManifest& m) {
  for (auto [l, n] : m.counts) out << "  " << language_name(l) << " " << n << "\n";
}

// CoTs for phase 2: a dataset store directory (record for the task's
// language, else any record of the task) or JSON Lines {"task_id",
// "language"?, "cot"} with the CoT as rendered text or JSON.
inline eval::CotProvider load_cots(const std::string& path) {
  using Key = std::pair<std::string, std::optional<LanguageId>>;
  auto table = std::make_shared<std::map<Key, scot::ScotDocument>>();
  if (fs::is_directory(path)) {
    auto store = dataset::load_store(path);
    for (auto& r : store.records) {
      table->emplace(Key{r.task_id, r.language}, r.cot);
      table->emplace(Key{r.task_id, std::nullopt}, r.cot);
    }
  } else {
    auto lines = text::split_lines(read_file(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (text::trim(lines[i]).empty()) continue;
      try {
        auto j = nlohmann::json::parse(lines[i]);
        std::optional<LanguageId> lang;
        if (j.contains("language")) lang = parse_language(j["language"].get<std::string>());
        const auto& c = j.at("cot");
        scot::ScotDocument doc = c.is_string() ? scot::parse_scot(c.get<std::string>()) : scot::document_from_json(c);
        table->emplace(Key{j.at("task_id").get<std::string>(), lang}, doc);
      } catch (const std::exception& e) {
        throw ConfigError("cots line " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  }
  return [table](const eval::BenchTask& t) -> std::optional<scot::ScotDocument> {
    if (auto it = table->find({t.task_id, t.language}); it != table->end()) return it->second;
    if (auto it = table->find({t.task_id, std::nullopt}); it != table->end()) return it->second;
    return std::nullopt;
  };
}

}  // namespace detail

// ---- build ----

struct BuildOptions {
  std::string seed_file;
  std::string out;
  bool live = false;
};

inline int cmd_build(const Config& cfg, const BuildOptions& opt, const Io& io = {}) {
  std::string seed = detail::pick(cfg, opt.seed_file, cfg.paths.seed);
  std::string out = detail::pick(cfg, opt.out, cfg.paths.store);
  if (!detail::need_file(io, "seed file", seed)) return kUsageError;
  if (out.empty()) {
    io.err << "error: no output store given (--out or paths.store)\n";
    return kUsageError;
  }
  dataset::BuildConfig bc;
  try {
    if (opt.live || cfg.agents.backend == "remote")
      bc.agent.backend = detail::remote_backend(cfg.agents.endpoint, cfg.agents.model, cfg.resolve(cfg.agents.transcript));
    else
      bc.agent.backend = std::make_shared<agents::MockBackend>(cfg.mock_seed);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  bc.agent.max_retries = cfg.agents.retries;
  bc.languages = cfg.languages;
  bc.workers = cfg.agents.max_in_flight;
  bc.abort_threshold = cfg.abort_threshold;
  bc.timestamp = build_timestamp();
  bc.cancel = io.cancel;

  dataset::SeedCorpus corpus;
  try {
    corpus = dataset::ingest_seed(seed);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  for (const auto& w : corpus.warnings)
    io.err << "warning: duplicate task_id '" << w.task_id << "' on line " << w.line << " (first on line " << w.first_line
           << "); keeping the first\n";

  dataset::BuildResult res;
  bool aborted = false;
  try {
    res = dataset::build_dataset(corpus.samples, bc);
  } catch (const dataset::PipelineAborted& e) {
    io.err << "error: " << e.what() << "\n";
    res = e.partial();
    aborted = true;
  }
  if (io.cancel && io.cancel->load()) res.complete = false;
  auto m = dataset::manifest_for(res, bc.languages, corpus.sha256, build_config_sha256(cfg));
  try {
    dataset::write_store(out, res.records, res.rejects, m);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  for (const auto& r : res.rejects) io.err << "rejected " << r.task_id << " at " << r.stage << ": " << r.reason << "\n";
  if (aborted || !res.complete) {
    io.err << "error: build incomplete; store at " << out << " is marked incomplete\n";
    return kDomainFailure;
  }
  try {
    m = dataset::verify_manifest(out);
  } catch (const dataset::IntegrityViolation& e) {
    io.err << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  io.out << detail::summary_line(m) << "\n";
  detail::print_counts(io.out, m);
  return kOk;
}

// ---- export ----

struct ExportOptions {
  std::string store;
  std::string out;
};

inline int cmd_export(const Config& cfg, const ExportOptions& opt, const Io& io = {}) {
  std::string store = detail::pick(cfg, opt.store, cfg.paths.store);
  std::string out = detail::pick(cfg, opt.out, cfg.paths.export_out);
  if (!detail::need_file(io, "store", store)) return kUsageError;
  if (out.empty()) {
    io.err << "error: no export path given (--out or paths.export)\n";
    return kUsageError;
  }
  dataset::LoadedStore loaded;
  try {
    loaded = dataset::load_store(store);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  if (auto v = dataset::store_violations(loaded); !v.empty()) {
    io.err << "error: " << dataset::IntegrityViolation(v).what() << "\n";
    return kDomainFailure;
  }
  std::size_t rows = dataset::export_instruction_jsonl(loaded.records, out);
  std::string sha = sha256_hex(read_file(out));
  fs::path mpath = fs::path(out).replace_extension(".manifest.json");
  write_file(mpath.string(), dataset::export_manifest(loaded.manifest, rows, sha).dump(2) + "\n");
  io.out << "exported " << rows << " rows to " << out << " (sha256 " << sha << ")\n";
  return kOk;
}

// ---- eval ----

struct EvalOptions {
  std::string bench;
  std::string cots;
  std::string report;     // JSON path; CSV and ledger are written next to it
  std::string aggregate;  // published-table CSV: arithmetic check only
  bool live = false;
};

inline int eval_aggregate(const std::string& path, const Io& io) {
  std::vector<eval::TableRow> rows;
  try {
    rows = eval::parse_table_csv(read_file(path));
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  bool ok = true;
  for (const auto& c : eval::table_parity(rows)) {
    io.out << (c.ok ? "ok   " : "FAIL ") << c.label << ": published " << c.published << ", recomputed " << c.recomputed
           << "\n";
    ok = ok && c.ok;
  }
  for (const auto& r : rows) {
    std::map<LanguageId, double> cells;
    for (auto [l, h] : r.cells) cells[l] = static_cast<double>(h) / 100.0;
    auto a = eval::aggregate(cells, std::nullopt, true);
    std::optional<double> delta;
    if (r.delta) delta = static_cast<double>(*r.delta) / 100.0;
    io.out << eval::table_row_text(r.model + " " + r.method, cells, a.average, delta) << "\n";
  }
  return ok ? kOk : kDomainFailure;
}

inline int cmd_eval(const Config& cfg, const EvalOptions& opt, const Io& io = {}) {
  if (!opt.aggregate.empty()) {
    if (!detail::need_file(io, "table", opt.aggregate)) return kUsageError;
    return eval_aggregate(opt.aggregate, io);
  }
  std::string bench = detail::pick(cfg, opt.bench, cfg.paths.benchmark);
  std::string cots = detail::pick(cfg, opt.cots, cfg.paths.cots);
  std::string report = detail::pick(cfg, opt.report, cfg.paths.reports);
  if (!detail::need_file(io, "benchmark", bench)) return kUsageError;
  if (!cots.empty() && !detail::need_file(io, "cots", cots)) return kUsageError;

  std::vector<eval::BenchTask> tasks;
  eval::CotProvider provider;
  std::shared_ptr<agents::ChatBackend> backend;
  try {
    tasks = eval::parse_bench_jsonl(read_file(bench));
    if (tasks.empty()) throw ConfigError("benchmark file " + bench + " has no tasks");
    if (!cots.empty()) provider = detail::load_cots(cots);
    if (opt.live || cfg.code.backend == "remote") {
      backend = detail::remote_backend(cfg.code.endpoint, cfg.code.model, "");
    } else {
      std::string script = cfg.resolve(cfg.code.script);
      if (script.empty() || !fs::exists(script)) throw ConfigError("scripted code backend needs code_backend.script");
      backend = std::make_shared<eval::ScriptedCodeBackend>(nlohmann::json::parse(read_file(script)));
    }
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  eval::ProtocolOptions po;
  po.workers = cfg.eval_workers;
  po.cancel = io.cancel;
  eval::EvalRun run;
  bool aborted = false;
  try {
    run = eval::run_protocol(tasks, *backend, provider, eval::sandbox_executor(cfg.runners, io.cancel), po);
  } catch (const eval::EvalAborted& e) {
    io.err << "error: " << e.what() << "\n";
    run = e.partial();
    aborted = true;
  }
  auto rep = eval::make_report(run);
  for (auto l : rep.skipped_languages) io.err << "warning: every " << language_name(l) << " task was skipped\n";
  if (!report.empty()) {
    fs::path rp(report);
    if (rp.has_parent_path()) fs::create_directories(rp.parent_path());
    write_file(rp.string(), eval::to_json(rep).dump(2) + "\n");
    write_file(fs::path(rp).replace_extension(".csv").string(), eval::to_csv(rep));
    std::string ledger;
    for (const auto& e : run.ledger) ledger += eval::to_json(e).dump() + "\n";
    write_file(fs::path(rp).replace_extension(".ledger.jsonl").string(), ledger);
  }
  if (rep.per_language.empty()) {
    io.err << "error: every task was skipped\n";
    return kDomainFailure;
  }
  std::map<LanguageId, double> p1, cot;
  for (auto& [l, s] : rep.per_language) {
    p1[l] = s.pass_at_1;
    cot[l] = s.cot_pass_at_1;
  }
  io.out << eval::table_row_text("Pass@1", p1, rep.baseline_avg, std::nullopt) << "\n";
  io.out << eval::table_row_text("CoT-Pass@1", cot, rep.avg, rep.delta) << "\n";
  if (aborted) return kDomainFailure;
  if (cfg.parity_mode) {
    bool missing = false;
    for (auto l : kAllLanguages)
      if (!rep.per_language.count(l)) {
        io.err << "error: parity mode needs " << language_name(l) << " results; none were produced\n";
        missing = true;
      }
    if (missing) return kDomainFailure;
  }
  return kOk;
}

// ---- analyze ----

struct AnalyzeOptions {
  std::string store;
  std::string heatmap;  // .csv or .svg, or a base path for both
  std::string rubric;
  bool verbose = false;
};

inline int cmd_analyze(const Config& cfg, const AnalyzeOptions& opt, const Io& io = {}) {
  std::string store = detail::pick(cfg, opt.store, cfg.paths.store);
  std::string heatmap = detail::pick(cfg, opt.heatmap, cfg.paths.heatmap);
  std::string rubric = detail::pick(cfg, opt.rubric, cfg.paths.rubric);
  if (store.empty() && rubric.empty()) {
    io.err << "error: nothing to analyze; give --store and/or --rubric\n";
    return kUsageError;
  }
  if (!store.empty() && !detail::need_file(io, "store", store)) return kUsageError;
  if (!rubric.empty() && !detail::need_file(io, "rubric", rubric)) return kUsageError;

  if (!store.empty()) {
    dataset::LoadedStore loaded;
    try {
      loaded = dataset::load_store(store);
    } catch (const Error& e) {
      io.err << "error: " << e.what() << "\n";
      return kUsageError;
    }
    if (!loaded.load_errors.empty()) {
      io.err << "error: " << text::join(loaded.load_errors, "; ") << "\n";
      return kUsageError;
    }
    auto langs = loaded.manifest.languages;
    analysis::SimilarityMatrix m;
    try {
      m = analysis::build_matrix(loaded.records, langs, cfg.weights, cfg.agents.max_in_flight);
    } catch (const analysis::NoSharedTasks& e) {
      io.err << "error: " << e.what() << "\n";
      return kDomainFailure;
    }
    io.out << analysis::heatmap_csv(m);
    if (opt.verbose) {
      io.out << "token channel\n" << analysis::heatmap_csv(analysis::build_matrix(loaded.records, langs, {1, 0}));
      io.out << "structure channel\n" << analysis::heatmap_csv(analysis::build_matrix(loaded.records, langs, {0, 1}));
    }
    if (!heatmap.empty()) {
      fs::path hp(heatmap);
      if (hp.has_parent_path()) fs::create_directories(hp.parent_path());
      auto ext = hp.extension().string();
      if (ext == ".csv" || ext.empty()) analysis::emit_heatmap(m, ext.empty() ? fs::path(heatmap + ".csv") : hp, analysis::HeatmapFormat::Csv);
      if (ext == ".svg" || ext.empty()) analysis::emit_heatmap(m, ext.empty() ? fs::path(heatmap + ".svg") : hp, analysis::HeatmapFormat::Svg);
    }
  }

  if (!rubric.empty()) {
    std::vector<analysis::RubricScore> scores;
    try {
      scores = analysis::parse_rubric_csv(read_file(rubric));
    } catch (const Error& e) {
      io.err << "error: " << e.what() << "\n";
      return kUsageError;
    }
    std::set<std::string> systems;
    for (const auto& s : scores) systems.insert(s.system);
    if (systems.empty()) {
      io.err << "error: rubric " << rubric << " has no rows\n";
      return kUsageError;
    }
    io.out << "system,rows,similarity,naturalness,educational_value\n";
    for (const auto& sys : systems) {
      auto m = analysis::aggregate_rubric(scores, sys);
      io.out << sys << "," << m.rows << "," << text::fixed(m.similarity, 2) << "," << text::fixed(m.naturalness, 2) << ","
             << text::fixed(m.educational_value, 2) << "\n";
    }
  }
  return kOk;
}

// ---- check ----

struct CheckOptions {
  std::string scot;
  std::string header;
  std::string lang;
  std::string reference;       // header to compare name/arity/order against
  std::string reference_lang;  // defaults to lang
};

inline int check_scot(const std::string& path, const Io& io) {
  std::string body;
  try {
    body = read_file(path);
  } catch (const IoError& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  scot::ScotDocument doc;
  try {
    doc = scot::parse_scot(body);
  } catch (const scot::ScotError& e) {
    io.out << path << ": " << e.what() << "\n";
    return kDomainFailure;
  }
  auto report = scot::validate(doc);
  for (const auto& v : report) io.out << path << ": " << scot::ScotErrorNames::name(v.kind) << " at " << v.path << ": " << v.message << "\n";
  if (!report.empty()) return kDomainFailure;
  io.out << path << ": ok (" << scot::structure_fingerprint(doc) << ")\n";
  return kOk;
}

inline int check_header(const CheckOptions& opt, const Io& io) {
  auto lang = try_parse_language(opt.lang);
  if (!lang) {
    io.err << "error: --lang must be one of the 12 languages, got '" << opt.lang << "'\n";
    return kUsageError;
  }
  std::optional<LanguageId> ref_lang = lang;
  if (!opt.reference_lang.empty()) ref_lang = try_parse_language(opt.reference_lang);
  if (!ref_lang) {
    io.err << "error: unknown --ref-lang '" << opt.reference_lang << "'\n";
    return kUsageError;
  }
  std::string body, ref_body;
  try {
    body = read_file(opt.header);
    if (!opt.reference.empty()) ref_body = read_file(opt.reference);
  } catch (const IoError& e) {
    io.err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  std::vector<std::string> problems;
  sig::Header h;
  try {
    h = sig::parse_header(*lang, body);
  } catch (const sig::SigError& e) {
    io.out << opt.header << ": " << e.what() << "\n";
    return kDomainFailure;
  }
  problems = sig::signature_problems(h.signature);
  if (!opt.reference.empty()) {
    try {
      auto ref = sig::parse_header(*ref_lang, ref_body);
      for (auto& p : agents::header_problems(ref, h)) problems.push_back(p);
    } catch (const sig::SigError& e) {
      io.err << "error: reference " << opt.reference << ": " << e.what() << "\n";
      return kUsageError;
    }
  }
  for (const auto& p : problems) io.out << opt.header << ": " << p << "\n";
  if (!problems.empty()) return kDomainFailure;
  io.out << opt.header << ": ok (" << h.signature.name << ", " << h.signature.params.size() << " parameters)\n";
  return kOk;
}

inline int cmd_check(const Config&, const CheckOptions& opt, const Io& io = {}) {
  if (opt.scot.empty() == opt.header.empty()) {
    io.err << "error: give exactly one of --scot or --header\n";
    return kUsageError;
  }
  if (!opt.scot.empty()) return check_scot(opt.scot, io);
  if (opt.lang.empty()) {
    io.err << "error: --header needs --lang\n";
    return kUsageError;
  }
  return check_header(opt, io);
}

}  // namespace polyscot::cli
