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

#include <atomic>
#include <csignal>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "polyscot/cli/commands.hpp"

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_sigint(int) { g_cancel.store(true); }

void install_sigint() {
  struct sigaction sa {};
  sa.sa_handler = on_sigint;
  sigemptyset(&sa.sa_mask);
  sigaction(SIGINT, &sa, nullptr);
  sigaction(SIGTERM, &sa, nullptr);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace polyscot::cli;
  CLI::App app{"polyscot: structured chain-of-thought dataset pipeline and evaluation harness"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON config file");

  BuildOptions build;
  auto* b = app.add_subcommand("build", "filter seeds, generate CoTs, translate headers, write a dataset store");
  b->add_option("--seed-file", build.seed_file, "seed JSON Lines");
  b->add_option("--out", build.out, "store directory");
  auto* mock = b->add_flag("--mock", "offline mock backend (default)");
  b->add_flag("--live", build.live, "remote chat-completions backend; needs MSCOT_API_KEY")->excludes(mock);

  ExportOptions exp;
  auto* e = app.add_subcommand("export", "write instruction-tuning JSON Lines from a store");
  e->add_option("--store", exp.store, "store directory");
  e->add_option("--out", exp.out, "output .jsonl");

  EvalOptions ev;
  auto* v = app.add_subcommand("eval", "two-phase Pass@1 / CoT-Pass@1 evaluation");
  v->add_option("--bench", ev.bench, "benchmark JSON Lines");
  v->add_option("--cots", ev.cots, "store directory or CoT JSON Lines for phase 2");
  v->add_option("--report", ev.report, "report .json (a .csv and .ledger.jsonl go next to it)");
  v->add_option("--aggregate", ev.aggregate, "check averages and deltas of a results-table CSV");
  v->add_flag("--live", ev.live, "remote code backend; needs MSCOT_API_KEY");

  AnalyzeOptions an;
  auto* a = app.add_subcommand("analyze", "CoT similarity heatmap and rubric means");
  a->add_option("--store", an.store, "store directory");
  a->add_option("--heatmap", an.heatmap, "output .csv, .svg, or a base path for both");
  a->add_option("--rubric", an.rubric, "rubric CSV");
  a->add_flag("--verbose", an.verbose, "also print the token and structure channels");

  CheckOptions ck;
  auto* k = app.add_subcommand("check", "lint a SCoT document or a header");
  auto* scot_opt = k->add_option("--scot", ck.scot, "SCoT text file");
  auto* header_opt = k->add_option("--header", ck.header, "header source file");
  k->add_option("--lang", ck.lang, "language of --header");
  k->add_option("--reference", ck.reference, "reference header; name, arity and order must match");
  k->add_option("--ref-lang", ck.reference_lang, "language of --reference (default: --lang)");
  scot_opt->excludes(header_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int rc = app.exit(err);
    return rc == 0 ? kOk : kUsageError;
  }

  Config cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
  } catch (const polyscot::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsageError;
  }

  install_sigint();
  Io io{std::cout, std::cerr, &g_cancel};
  try {
    if (*b) return cmd_build(cfg, build, io);
    if (*e) return cmd_export(cfg, exp, io);
    if (*v) return cmd_eval(cfg, ev, io);
    if (*a) return cmd_analyze(cfg, an, io);
    if (*k) return cmd_check(cfg, ck, io);
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsageError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kDomainFailure;
  }
  return kUsageError;
}
