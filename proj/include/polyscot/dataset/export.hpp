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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyscot/agents/prompts.hpp"
#include "polyscot/dataset/store.hpp"
#include "polyscot/lora/adapter.hpp"

namespace polyscot::dataset {

inline std::string instruction_for(LanguageId l) {
  return agents::substitute(agents::templates::kInstruction, {{"language", std::string(language_name(l))}});
}

// Canonical docstring + signature text for a record.
inline std::string prompt_text(const CotRecord& r) {
  return sig::render_header(r.language, r.header.docstring, r.header.signature);
}

// One instruction-tuning row per record, ordered by (task_id, language).
// Returns the number of lines written.
inline std::size_t export_instruction_jsonl(std::vector<CotRecord> records, const std::filesystem::path& path) {
  std::sort(records.begin(), records.end(), record_less);
  std::string body;
  for (const auto& r : records) {
    body += nlohmann::json{{"task_id", r.task_id},
                           {"language", language_name(r.language)},
                           {"instruction", instruction_for(r.language)},
                           {"input", prompt_text(r)},
                           {"output", scot::render_scot(r.cot)}}
                .dump() +
            "\n";
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_file(path.string(), body);
  return records.size();
}

// Manifest written next to an export: dataset summary plus the training
// hyper-parameters the export is meant for.
inline nlohmann::json export_manifest(const DatasetManifest& m, std::size_t rows, const std::string& export_sha256) {
  return {{"rows", rows}, {"sha256", export_sha256}, {"dataset", to_json(m)}, {"hyperparameters", lora::to_json(lora::reference_hyperparams())}};
}

}  // namespace polyscot::dataset
