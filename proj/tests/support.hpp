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

#include <sys/wait.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyscot/core/hash.hpp"
#include "polyscot/core/text.hpp"
#include "polyscot/scot/grammar.hpp"

namespace testsupport {

namespace fs = std::filesystem;
using nlohmann::json;

inline std::string fixture(const std::string& rel) { return std::string(POLYSCOT_FIXTURES) + "/" + rel; }

inline std::vector<json> read_jsonl(const std::string& path) {
  std::vector<json> out;
  for (auto& l : polyscot::text::split_lines(polyscot::read_file(path)))
    if (!polyscot::text::trim(l).empty()) out.push_back(json::parse(l));
  return out;
}

// Fresh directory under the system temp dir, removed on destruction.
class Scratch {
 public:
  explicit Scratch(const std::string& tag = "t") {
    static std::atomic<int> n{0};
    path_ = fs::temp_directory_path() /
            ("polyscot-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& rel) const { return (path_ / rel).string(); }

 private:
  fs::path path_;
};

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

struct CliRun {
  int rc = -1;
  std::string out;
  std::string err;
};

// Runs the built CLI through /bin/sh; `env_prefix` is prepended verbatim
// (e.g. "env -u MSCOT_API_KEY").
inline CliRun run_cli(const std::vector<std::string>& args, const std::string& env_prefix = "") {
  Scratch s("cli");
  std::string cmd = env_prefix.empty() ? "" : env_prefix + " ";
  cmd += shell_quote(POLYSCOT_CLI);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " > " + shell_quote(s / "out") + " 2> " + shell_quote(s / "err");
  int st = std::system(cmd.c_str());
  CliRun r;
  r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = polyscot::read_file(s / "out");
  r.err = polyscot::read_file(s / "err");
  return r;
}

// ---- random SCoT documents ----

class ScotGen {
 public:
  explicit ScotGen(std::uint64_t seed) : rng_(seed) {}

  polyscot::scot::ScotDocument document() {
    polyscot::scot::ScotDocument d;
    d.input_spec = phrase(1, 5);
    d.output_spec = phrase(1, 4);
    d.body = list(0);
    return d;
  }

  // Renders with surface noise the parser must absorb: numbering style,
  // tabs, blank lines, preamble case.
  std::string noisy_text(const polyscot::scot::ScotDocument& d) {
    std::string out = pick({"Let's think step by step.", "let's think step by step", "LET'S THINK STEP BY STEP."});
    out += "\n";
    if (coin(0.3)) out += "\n";
    out += pick({"Input: ", "input: ", "INPUT:  "}) + d.input_spec + "\n";
    out += pick({"Output: ", "output: ", "Output:\t"}) + d.output_spec + "\n";
    std::size_t counter = 0;
    emit(d.body, 0, counter, out);
    return out;
  }

 private:
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t upto(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::string pick(std::initializer_list<const char*> xs) { return *(xs.begin() + upto(xs.size())); }

  std::string phrase(std::size_t lo, std::size_t hi) {
    static const char* words[] = {"set", "the", "total", "to", "0", "add", "x", "count", "list", "value", "return",
                                  "result", "n", "is", "even", "i", "+", "1", "append", "string", "max", "min",
                                  "swap", "a", "b", "< 0", "== 2", "index"};
    std::size_t n = lo + upto(hi - lo + 1);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + std::string(words[upto(std::size(words))]);
    return s;
  }

  std::string step_text() {
    // Must not read as a branch, loop or numbered line.
    return pick({"compute ", "return ", "set ", "append ", "increment ", "print "}) + phrase(1, 4);
  }

  polyscot::scot::NodeList list(int depth) {
    polyscot::scot::NodeList l;
    std::size_t n = 1 + upto(depth == 0 ? 5 : 3);
    for (std::size_t i = 0; i < n; ++i) {
      double r = std::uniform_real_distribution<double>(0, 1)(rng_);
      if (depth < 3 && r < 0.2) {
        polyscot::scot::Branch b{"if " + phrase(1, 3), list(depth + 1), {}};
        if (coin(0.4)) b.else_body = list(depth + 1);
        l.push_back(std::move(b));
      } else if (depth < 3 && r < 0.35) {
        l.push_back(polyscot::scot::Loop{pick({"for each ", "for ", "while "}) + phrase(1, 3), list(depth + 1)});
      } else {
        l.push_back(polyscot::scot::Step{step_text()});
      }
    }
    return l;
  }

  void line(std::size_t depth, std::size_t& counter, const std::string& t, std::string& out) {
    if (coin(0.1)) out += coin(0.5) ? "\n" : "   \n";
    for (std::size_t i = 0; i < depth; ++i) out += coin(0.3) ? "\t" : "    ";
    ++counter;
    switch (upto(3)) {
      case 0: out += std::to_string(counter) + ". "; break;
      case 1: out += std::to_string(counter) + ") "; break;
      default: break;
    }
    out += t + (coin(0.2) ? "  " : "") + "\n";
  }

  void emit(const polyscot::scot::NodeList& l, std::size_t depth, std::size_t& counter, std::string& out) {
    for (const auto& n : l) {
      if (n.is_step()) {
        line(depth, counter, n.step().text, out);
      } else if (n.is_branch()) {
        line(depth, counter, n.branch().condition + ":", out);
        emit(n.branch().then_body, depth + 1, counter, out);
        if (!n.branch().else_body.empty()) {
          line(depth, counter, "else:", out);
          emit(n.branch().else_body, depth + 1, counter, out);
        }
      } else {
        line(depth, counter, n.loop().header + ":", out);
        emit(n.loop().body, depth + 1, counter, out);
      }
    }
  }

  std::mt19937_64 rng_;
};

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace testsupport
