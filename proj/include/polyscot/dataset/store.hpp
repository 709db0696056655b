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
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "polyscot/core/hash.hpp"
#include "polyscot/core/language.hpp"
#include "polyscot/scot/grammar.hpp"
#include "polyscot/sig/header.hpp"

namespace polyscot::dataset {

namespace fs = std::filesystem;
using nlohmann::json;

struct Provenance {
  std::string backend;
  std::string template_version;
  std::string timestamp;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct CotRecord {
  std::string task_id;
  LanguageId language = LanguageId::Python;
  sig::Header header;
  scot::ScotDocument cot;
  Provenance provenance;
};

inline bool record_less(const CotRecord& a, const CotRecord& b) {
  return std::tie(a.task_id, a.language) < std::tie(b.task_id, b.language);
}

struct Reject {
  std::string task_id;
  std::string stage;
  std::string reason;
};

struct DatasetManifest {
  std::vector<LanguageId> languages;
  std::map<LanguageId, std::size_t> counts;
  std::size_t total = 0;
  std::string seed_sha256;
  std::string config_sha256;
  std::size_t seed_pool = 0;
  std::size_t rejected = 0;
  bool complete = true;
  // task_id -> SHA-256 of its rendered CoT.
  std::map<std::string, std::string> cot_digests;
};

inline json to_json(const CotRecord& r) {
  return {{"task_id", r.task_id},
          {"language", language_name(r.language)},
          {"header", r.header.raw_text},
          {"cot", scot::to_json(r.cot)},
          {"provenance",
           {{"backend", r.provenance.backend},
            {"template_version", r.provenance.template_version},
            {"timestamp", r.provenance.timestamp}}}};
}

inline CotRecord record_from_json(const json& j) {
  CotRecord r;
  r.task_id = j.at("task_id").get<std::string>();
  r.language = parse_language(j.at("language").get<std::string>());
  r.header = sig::parse_header(r.language, j.at("header").get<std::string>());
  r.cot = scot::document_from_json(j.at("cot"));
  const json& p = j.at("provenance");
  r.provenance = {p.value("backend", ""), p.value("template_version", ""), p.value("timestamp", "")};
  return r;
}

inline json to_json(const DatasetManifest& m) {
  json counts = json::object();
  for (auto [l, n] : m.counts) counts[std::string(language_name(l))] = n;
  json langs = json::array();
  for (auto l : m.languages) langs.push_back(language_name(l));
  return {{"languages", langs},          {"counts", counts},           {"total", m.total},
          {"seed_sha256", m.seed_sha256}, {"config_sha256", m.config_sha256}, {"seed_pool", m.seed_pool},
          {"rejected", m.rejected},       {"complete", m.complete},     {"cot_digests", m.cot_digests}};
}

inline DatasetManifest manifest_from_json(const json& j) {
  DatasetManifest m;
  for (const auto& l : j.at("languages")) m.languages.push_back(parse_language(l.get<std::string>()));
  for (auto& [k, v] : j.at("counts").items()) m.counts[parse_language(k)] = v.get<std::size_t>();
  m.total = j.at("total").get<std::size_t>();
  m.seed_sha256 = j.value("seed_sha256", "");
  m.config_sha256 = j.value("config_sha256", "");
  m.seed_pool = j.value("seed_pool", std::size_t{0});
  m.rejected = j.value("rejected", std::size_t{0});
  m.complete = j.value("complete", false);
  m.cot_digests = j.value("cot_digests", std::map<std::string, std::string>{});
  return m;
}

inline std::string cot_digest(const scot::ScotDocument& d) { return sha256_hex(scot::render_scot(d)); }

inline DatasetManifest summarize(const std::vector<CotRecord>& records, std::vector<LanguageId> languages) {
  DatasetManifest m;
  std::sort(languages.begin(), languages.end());
  m.languages = languages;
  for (auto l : languages) m.counts[l] = 0;
  for (const auto& r : records) {
    ++m.counts[r.language];
    m.cot_digests.emplace(r.task_id, cot_digest(r.cot));
  }
  m.total = records.size();
  return m;
}

inline fs::path shard_path(const fs::path& store, LanguageId l) {
  return store / "records" / (std::string(language_name(l)) + ".jsonl");
}

// Writes shards, rejects and manifest. Shards from an earlier build in the
// same directory are replaced.
inline void write_store(const fs::path& store, std::vector<CotRecord> records, const std::vector<Reject>& rejects,
                        const DatasetManifest& manifest) {
  std::error_code ec;
  fs::create_directories(store / "records", ec);
  if (ec) throw IoError("cannot create '" + (store / "records").string() + "': " + ec.message());
  for (const auto& e : fs::directory_iterator(store / "records"))
    if (e.path().extension() == ".jsonl") fs::remove(e.path());
  std::sort(records.begin(), records.end(), record_less);
  std::map<LanguageId, std::string> shards;
  for (auto l : manifest.languages) shards[l];
  for (const auto& r : records) shards[r.language] += to_json(r).dump() + "\n";
  for (const auto& [l, body] : shards) write_file(shard_path(store, l).string(), body);
  std::string rej;
  for (const auto& r : rejects) rej += json{{"task_id", r.task_id}, {"stage", r.stage}, {"reason", r.reason}}.dump() + "\n";
  write_file((store / "rejects.jsonl").string(), rej);
  write_file((store / "manifest.json").string(), to_json(manifest).dump(2) + "\n");
}

struct LoadedStore {
  DatasetManifest manifest;
  std::vector<CotRecord> records;
  std::vector<std::string> load_errors;
};

inline LoadedStore load_store(const fs::path& store) {
  LoadedStore out;
  fs::path mpath = store / "manifest.json";
  try {
    out.manifest = manifest_from_json(json::parse(read_file(mpath.string())));
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError("unreadable manifest '" + mpath.string() + "': " + e.what());
  }
  if (!fs::is_directory(store / "records")) return out;
  std::vector<fs::path> shards;
  for (const auto& e : fs::directory_iterator(store / "records"))
    if (e.path().extension() == ".jsonl") shards.push_back(e.path());
  std::sort(shards.begin(), shards.end());
  for (const auto& p : shards) {
    auto lines = text::split_lines(read_file(p.string()));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (text::trim(lines[i]).empty()) continue;
      try {
        out.records.push_back(record_from_json(json::parse(lines[i])));
      } catch (const std::exception& e) {
        out.load_errors.push_back(p.filename().string() + ":" + std::to_string(i + 1) + ": " + e.what());
      }
    }
  }
  std::sort(out.records.begin(), out.records.end(), record_less);
  return out;
}

class IntegrityViolation : public Error {
 public:
  explicit IntegrityViolation(std::vector<std::string> v)
      : Error("IntegrityViolation: " + text::join(v, "; ")), violations_(std::move(v)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Every integrity problem in a loaded store; empty means intact.
inline std::vector<std::string> store_violations(const LoadedStore& s) {
  std::vector<std::string> v = s.load_errors;
  const auto& m = s.manifest;
  if (!m.complete) v.push_back("manifest is marked incomplete");
  std::set<LanguageId> langs(m.languages.begin(), m.languages.end());
  std::map<LanguageId, std::size_t> counts;
  std::map<std::string, std::set<LanguageId>> seen;
  std::map<std::string, std::string> first_digest;
  for (const auto& r : s.records) {
    std::string where = "(" + r.task_id + ", " + std::string(language_name(r.language)) + ")";
    if (!langs.count(r.language)) v.push_back("record " + where + " is in a language the manifest does not list");
    if (r.header.language != r.language) v.push_back("record " + where + " has a header in another language");
    if (!seen[r.task_id].insert(r.language).second) v.push_back("duplicate record " + where);
    ++counts[r.language];
    auto report = scot::validate(r.cot);
    if (!report.empty()) {
      v.push_back("record " + where + " has an invalid CoT: " + report.front().message);
      continue;
    }
    std::string d = cot_digest(r.cot);
    auto [it, fresh] = first_digest.emplace(r.task_id, d);
    if (!fresh && it->second != d) v.push_back("task " + r.task_id + ": CoT differs across languages at " + where);
    if (auto md = m.cot_digests.find(r.task_id); md == m.cot_digests.end())
      v.push_back("task " + r.task_id + ": not listed in the manifest");
    else if (md->second != d)
      v.push_back("task " + r.task_id + ": CoT does not match the manifest digest at " + where);
  }
  for (const auto& [task, ls] : seen)
    for (auto l : langs)
      if (!ls.count(l)) v.push_back("fan-out incomplete: task " + task + " has no " + std::string(language_name(l)) + " record");
  for (const auto& [task, _] : m.cot_digests)
    if (!seen.count(task)) v.push_back("task " + task + " is in the manifest but has no records");
  std::size_t total = 0;
  for (auto l : langs) {
    std::size_t want = m.counts.count(l) ? m.counts.at(l) : 0;
    if (counts[l] != want)
      v.push_back(std::string(language_name(l)) + ": manifest counts " + std::to_string(want) + ", store holds " +
                  std::to_string(counts[l]));
    total += counts[l];
  }
  std::size_t msum = 0;
  for (auto [_, n] : m.counts) msum += n;
  if (m.total != msum) v.push_back("manifest total " + std::to_string(m.total) + " != sum of counts " + std::to_string(msum));
  if (total != m.total) v.push_back("store holds " + std::to_string(total) + " records, manifest says " + std::to_string(m.total));
  return v;
}

// Recomputes counts and the one-to-many property; throws on any violation.
inline DatasetManifest verify_manifest(const fs::path& store) {
  auto loaded = load_store(store);
  if (auto v = store_violations(loaded); !v.empty()) throw IntegrityViolation(std::move(v));
  return loaded.manifest;
}

}  // namespace polyscot::dataset
