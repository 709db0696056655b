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
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "polyscot/agents/agents.hpp"
#include "polyscot/core/parallel.hpp"
#include "polyscot/dataset/seed.hpp"
#include "polyscot/dataset/store.hpp"

namespace polyscot::dataset {

struct BuildConfig {
  agents::AgentConfig agent;
  std::vector<LanguageId> languages{kAllLanguages.begin(), kAllLanguages.end()};
  std::size_t workers = 8;
  // Abort once more than this fraction of seeds hit backend failures.
  double abort_threshold = 0.2;
  std::string timestamp = "1970-01-01T00:00:00Z";
  const std::atomic<bool>* cancel = nullptr;
};

struct BuildResult {
  std::vector<CotRecord> records;
  std::vector<Reject> rejects;
  std::size_t seeds = 0;
  std::size_t backend_failures = 0;
  bool complete = true;
};

class PipelineAborted : public Error {
 public:
  PipelineAborted(const std::string& why, BuildResult partial)
      : Error("PipelineAborted: " + why), partial_(std::move(partial)) {}
  const BuildResult& partial() const noexcept { return partial_; }

 private:
  BuildResult partial_;
};

namespace detail {

struct SeedOutcome {
  std::vector<CotRecord> records;
  std::optional<Reject> reject;
  bool backend_failure = false;
  bool done = false;
};

inline SeedOutcome process_seed(const SeedSample& seed, const BuildConfig& cfg) {
  SeedOutcome out;
  auto reject = [&](std::string stage, std::string reason) {
    out.records.clear();
    out.reject = Reject{seed.task_id, std::move(stage), std::move(reason)};
  };
  std::string stage = "cq";
  try {
    if (!agents::cq_check(seed, cfg.agent)) {
      reject("cq", "CQAgent verdict False");
      return out;
    }
    stage = "parse";
    sig::Header source = agents::seed_header(seed);
    stage = "scot";
    scot::ScotDocument cot = agents::scot_generate(source, cfg.agent, seed.task_id + "/scot");
    Provenance prov{cfg.agent.backend->kind(), std::string(agents::templates::kVersion), cfg.timestamp};
    for (LanguageId l : cfg.languages) {
      stage = "ct:" + std::string(language_name(l));
      sig::Header h = agents::ct_translate(source, l, cfg.agent,
                                           seed.task_id + "/ct/" + std::string(language_name(l)));
      out.records.push_back(CotRecord{seed.task_id, l, std::move(h), cot, prov});
    }
  } catch (const agents::BackendError& e) {
    out.backend_failure = true;
    reject(stage, e.what());
  } catch (const Error& e) {
    reject(stage, e.what());
  }
  return out;
}

}  // namespace detail

// filter -> one CoT from the source header -> translate into every language,
// pairing each translation with that same CoT.
inline BuildResult build_dataset(const std::vector<SeedSample>& seeds, const BuildConfig& cfg) {
  if (cfg.languages.empty()) throw Error("build_dataset: no target languages");
  if (!cfg.agent.backend) throw Error("build_dataset: no backend configured");
  std::vector<LanguageId> langs = cfg.languages;
  std::sort(langs.begin(), langs.end());
  langs.erase(std::unique(langs.begin(), langs.end()), langs.end());
  BuildConfig run = cfg;
  run.languages = langs;

  std::vector<detail::SeedOutcome> outcomes(seeds.size());
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> failures{0};
  const double limit = cfg.abort_threshold * static_cast<double>(seeds.size());
  parallel_for(
      seeds.size(), cfg.workers,
      [&](std::size_t i) {
        if (cfg.cancel && cfg.cancel->load()) return;
        outcomes[i] = detail::process_seed(seeds[i], run);
        outcomes[i].done = true;
        if (outcomes[i].backend_failure && static_cast<double>(++failures) > limit) stop = true;
      },
      &stop);

  BuildResult res;
  res.seeds = seeds.size();
  for (auto& o : outcomes) {
    if (!o.done) {
      res.complete = false;
      continue;
    }
    if (o.backend_failure) ++res.backend_failures;
    if (o.reject) res.rejects.push_back(std::move(*o.reject));
    for (auto& r : o.records) res.records.push_back(std::move(r));
  }
  std::sort(res.records.begin(), res.records.end(), record_less);
  if (static_cast<double>(res.backend_failures) > limit) {
    res.complete = false;
    throw PipelineAborted(std::to_string(res.backend_failures) + " of " + std::to_string(seeds.size()) +
                              " seeds failed at the backend (threshold " +
                              std::to_string(static_cast<int>(cfg.abort_threshold * 100)) + "%)",
                          std::move(res));
  }
  return res;
}

inline DatasetManifest manifest_for(const BuildResult& res, const std::vector<LanguageId>& languages,
                                    const std::string& seed_sha256, const std::string& config_sha256) {
  DatasetManifest m = summarize(res.records, languages);
  m.seed_sha256 = seed_sha256;
  m.config_sha256 = config_sha256;
  m.seed_pool = res.seeds;
  m.rejected = res.rejects.size();
  m.complete = res.complete;
  return m;
}

}  // namespace polyscot::dataset
