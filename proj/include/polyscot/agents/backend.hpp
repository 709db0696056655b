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
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include "polyscot/core/error.hpp"

namespace polyscot::agents {

struct Decoding {
  double temperature = 0.0;
  int max_new_tokens = 512;
  int max_input_tokens = 512;
};

struct ChatRequest {
  std::string system;
  std::string user;
  Decoding decoding;
  // Optional lookup key for fixture-driven backends (e.g. a task id).
  std::string key;
};

// Transport failures, timeouts, non-2xx replies.
class BackendError : public Error {
 public:
  using Error::Error;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  // Must tolerate concurrent calls.
  virtual std::string complete(const ChatRequest& req) = 0;
  virtual std::string kind() const = 0;
  // Remote backends back off between retries; local ones do not.
  virtual bool wants_backoff() const { return false; }
};

// Adapts a callable; used for scripted backends in tests and the eval harness.
class FunctionBackend : public ChatBackend {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit FunctionBackend(Fn fn, std::string kind = "function") : fn_(std::move(fn)), kind_(std::move(kind)) {}
  std::string complete(const ChatRequest& req) override { return fn_(req); }
  std::string kind() const override { return kind_; }

 private:
  Fn fn_;
  std::string kind_;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline void real_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

struct AgentConfig {
  std::shared_ptr<ChatBackend> backend;
  int max_retries = 2;
  Decoding decoding;
  Sleeper sleep = real_sleep;
};

// Delay before retry number `attempt` (1-based): 1s, 2s, 4s, capped at 4s.
inline std::chrono::milliseconds backoff_delay(int attempt) {
  int shift = attempt - 1 < 2 ? attempt - 1 : 2;
  return std::chrono::milliseconds(1000 << shift);
}

// Whitespace-delimited words stand in for model tokens.
inline std::string truncate_tokens(std::string_view s, int max_tokens, bool* truncated = nullptr) {
  int count = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    if (i == s.size()) break;
    if (count == max_tokens) {
      if (truncated) *truncated = true;
      return std::string(s.substr(0, i));
    }
    while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    ++count;
  }
  if (truncated) *truncated = false;
  return std::string(s);
}

}  // namespace polyscot::agents
