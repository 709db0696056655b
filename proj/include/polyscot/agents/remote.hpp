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

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>

#ifndef POLYSCOT_NO_TLS
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#endif
#include <httplib.h>
// resolv.h defines _res as a macro, which breaks Eigen and other headers.
#ifdef _res
#undef _res
#endif
#include <json.hpp>

#include "polyscot/agents/backend.hpp"

namespace polyscot::agents {

inline constexpr const char* kApiKeyEnv = "MSCOT_API_KEY";

struct RemoteOptions {
  std::string base_url;  // e.g. https://host/v1
  std::string model;
  std::string token_env = kApiKeyEnv;
  std::chrono::seconds timeout{60};
  std::string transcript_path;  // empty: no transcript
};

class MissingApiKey : public Error {
 public:
  explicit MissingApiKey(const std::string& env)
      : Error("environment variable " + env + " is not set; the live backend needs a bearer token") {}
};

// OpenAI-style chat-completions client. The token is read from the
// environment once and never written anywhere.
class RemoteEndpoint : public ChatBackend {
 public:
  explicit RemoteEndpoint(RemoteOptions opts) : opts_(std::move(opts)) {
    const char* tok = std::getenv(opts_.token_env.c_str());
    if (!tok || !*tok) throw MissingApiKey(opts_.token_env);
    token_ = tok;
    auto scheme = opts_.base_url.find("://");
    if (scheme == std::string::npos) throw Error("base URL needs a scheme: '" + opts_.base_url + "'");
    auto slash = opts_.base_url.find('/', scheme + 3);
    origin_ = opts_.base_url.substr(0, slash);
    prefix_ = slash == std::string::npos ? "" : opts_.base_url.substr(slash);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }

  std::string kind() const override { return "remote"; }
  bool wants_backoff() const override { return true; }

  std::string complete(const ChatRequest& req) override {
    nlohmann::json body{{"model", opts_.model},
                        {"messages",
                         {{{"role", "system"}, {"content", req.system}}, {{"role", "user"}, {"content", req.user}}}},
                        {"temperature", req.decoding.temperature},
                        {"max_tokens", req.decoding.max_new_tokens}};
    httplib::Client cli(origin_);
    auto secs = static_cast<time_t>(opts_.timeout.count());
    cli.set_connection_timeout(secs, 0);
    cli.set_read_timeout(secs, 0);
    cli.set_write_timeout(secs, 0);
    cli.set_bearer_token_auth(token_);
    auto res = cli.Post(prefix_ + "/chat/completions", body.dump(), "application/json");

    nlohmann::json log{{"request", body}};
    if (!res) {
      log["error"] = httplib::to_string(res.error());
      record(log);
      throw BackendError("chat request failed: " + httplib::to_string(res.error()));
    }
    log["status"] = res->status;
    if (res->status < 200 || res->status >= 300) {
      log["response"] = res->body.substr(0, 2048);
      record(log);
      throw BackendError("chat endpoint returned HTTP " + std::to_string(res->status));
    }
    std::string content;
    try {
      auto j = nlohmann::json::parse(res->body);
      content = j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception& e) {
      log["response"] = res->body.substr(0, 2048);
      record(log);
      throw BackendError(std::string("malformed chat response: ") + e.what());
    }
    log["response"] = content;
    record(log);
    return content;
  }

 private:
  void record(const nlohmann::json& entry) {
    if (opts_.transcript_path.empty()) return;
    std::string line = entry.dump();
    // Belt and braces: the token is never in `entry`, but scrub anyway.
    for (std::size_t at; (at = line.find(token_)) != std::string::npos;) line.replace(at, token_.size(), "[REDACTED]");
    std::lock_guard lock(mu_);
    std::ofstream(opts_.transcript_path, std::ios::app) << line << '\n';
  }

  RemoteOptions opts_;
  std::string token_;
  std::string origin_;
  std::string prefix_;
  std::mutex mu_;
};

}  // namespace polyscot::agents
