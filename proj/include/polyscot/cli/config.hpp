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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyscot/analysis/similarity.hpp"
#include "polyscot/core/error.hpp"
#include "polyscot/core/hash.hpp"
#include "polyscot/core/language.hpp"
#include "polyscot/eval/sandbox.hpp"

namespace polyscot::cli {

using nlohmann::json;

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct AgentSettings {
  std::string backend = "mock";  // mock | remote
  std::string endpoint;          // base URL for remote, e.g. https://host/v1
  std::string model;
  int retries = 2;
  std::size_t max_in_flight = 8;
  std::string transcript;  // remote only; token is scrubbed
};

struct CodeBackendSettings {
  std::string backend = "scripted";  // scripted | remote
  std::string script;                // scripted: {"task": {"phase1", "phase2"}}
  std::string endpoint;
  std::string model;
};

struct Paths {
  std::string seed;
  std::string store;
  std::string benchmark;
  std::string cots;
  std::string reports;
  std::string export_out;
  std::string heatmap;
  std::string rubric;
};

struct Config {
  AgentSettings agents;
  CodeBackendSettings code;
  std::vector<LanguageId> languages{kAllLanguages.begin(), kAllLanguages.end()};
  eval::RunnerSpec runners = eval::default_runner_spec();
  Paths paths;
  analysis::SimilarityWeights weights;
  std::uint64_t mock_seed = 42;
  double abort_threshold = 0.2;
  bool parity_mode = false;
  std::size_t eval_workers = 4;
  std::filesystem::path base_dir = ".";  // relative paths resolve here
  json raw = json::object();

  std::string resolve(const std::string& p) const {
    if (p.empty()) return p;
    std::filesystem::path path(p);
    return path.is_absolute() ? p : (base_dir / path).lexically_normal().string();
  }
};

namespace detail {

template <typename T>
void get_if(const json& j, const char* key, T& dst) {
  if (j.contains(key) && !j[key].is_null()) dst = j[key].get<T>();
}

inline void load_runners(const json& j, eval::RunnerSpec& spec) {
  if (j.contains("env_allowlist")) spec.env_allowlist = j["env_allowlist"].get<std::vector<std::string>>();
  if (!j.contains("languages")) return;
  for (auto& [name, r] : j["languages"].items()) {
    LanguageId l = parse_language(name);
    auto& runner = spec.runners[l];
    if (runner.extension.empty()) runner.extension = std::string(file_extension(l));
    get_if(r, "extension", runner.extension);
    get_if(r, "compile", runner.compile);
    get_if(r, "run", runner.run);
    get_if(r, "timeout_seconds", runner.timeout_seconds);
    if (text::trim(runner.run).empty()) throw ConfigError("runner for " + name + " has no run command");
    if (runner.timeout_seconds <= 0) throw ConfigError("runner for " + name + " needs a positive timeout");
  }
}

}  // namespace detail

inline Config config_from_json(const json& j, std::filesystem::path base_dir = ".") {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  Config c;
  c.raw = j;
  c.base_dir = std::move(base_dir);
  try {
    if (j.contains("agents")) {
      const auto& a = j["agents"];
      detail::get_if(a, "backend", c.agents.backend);
      detail::get_if(a, "endpoint", c.agents.endpoint);
      detail::get_if(a, "model", c.agents.model);
      detail::get_if(a, "retries", c.agents.retries);
      detail::get_if(a, "max_in_flight", c.agents.max_in_flight);
      detail::get_if(a, "transcript", c.agents.transcript);
      detail::get_if(a, "abort_threshold", c.abort_threshold);
    }
    if (j.contains("code_backend")) {
      const auto& a = j["code_backend"];
      detail::get_if(a, "backend", c.code.backend);
      detail::get_if(a, "script", c.code.script);
      detail::get_if(a, "endpoint", c.code.endpoint);
      detail::get_if(a, "model", c.code.model);
    }
    if (j.contains("languages")) {
      c.languages.clear();
      for (const auto& l : j["languages"]) c.languages.push_back(parse_language(l.get<std::string>()));
      if (c.languages.empty()) throw ConfigError("languages must not be empty");
    }
    if (j.contains("runners")) detail::load_runners(j["runners"], c.runners);
    if (j.contains("paths")) {
      const auto& p = j["paths"];
      detail::get_if(p, "seed", c.paths.seed);
      detail::get_if(p, "store", c.paths.store);
      detail::get_if(p, "benchmark", c.paths.benchmark);
      detail::get_if(p, "cots", c.paths.cots);
      detail::get_if(p, "reports", c.paths.reports);
      detail::get_if(p, "export", c.paths.export_out);
      detail::get_if(p, "heatmap", c.paths.heatmap);
      detail::get_if(p, "rubric", c.paths.rubric);
    }
    if (j.contains("similarity")) {
      detail::get_if(j["similarity"], "token_weight", c.weights.token);
      detail::get_if(j["similarity"], "structure_weight", c.weights.structure);
    }
    if (j.contains("seeds")) detail::get_if(j["seeds"], "mock", c.mock_seed);
    if (j.contains("eval")) {
      detail::get_if(j["eval"], "parity_mode", c.parity_mode);
      detail::get_if(j["eval"], "workers", c.eval_workers);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.agents.backend != "mock" && c.agents.backend != "remote")
    throw ConfigError("agents.backend must be 'mock' or 'remote', got '" + c.agents.backend + "'");
  if (c.code.backend != "scripted" && c.code.backend != "remote")
    throw ConfigError("code_backend.backend must be 'scripted' or 'remote', got '" + c.code.backend + "'");
  if (c.agents.retries < 0) throw ConfigError("agents.retries must be >= 0");
  if (c.agents.max_in_flight == 0) throw ConfigError("agents.max_in_flight must be >= 1");
  if (c.weights.token < 0 || c.weights.structure < 0 || c.weights.token + c.weights.structure <= 0)
    throw ConfigError("similarity weights must be non-negative and not both zero");
  if (c.abort_threshold < 0 || c.abort_threshold > 1) throw ConfigError("agents.abort_threshold must be in [0,1]");
  return c;
}

inline Config load_config(const std::string& path) {
  std::string body;
  try {
    body = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  json j;
  try {
    j = json::parse(body);
  } catch (const std::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j, std::filesystem::path(path).parent_path());
}

// Hash of the settings that shape build output (not paths).
inline std::string build_config_sha256(const Config& c) {
  json langs = json::array();
  for (auto l : c.languages) langs.push_back(language_name(l));
  json j = {{"backend", c.agents.backend}, {"model", c.agents.model},   {"retries", c.agents.retries},
            {"languages", langs},          {"mock_seed", c.mock_seed}, {"abort_threshold", c.abort_threshold}};
  return sha256_hex(j.dump());
}

// Fixed unless SOURCE_DATE_EPOCH is set, so rebuilds stay byte-identical.
inline std::string build_timestamp() {
  const char* e = std::getenv("SOURCE_DATE_EPOCH");
  std::time_t t = 0;
  if (e && *e) {
    try {
      t = static_cast<std::time_t>(std::stoll(e));
    } catch (...) {
      t = 0;
    }
  }
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace polyscot::cli
