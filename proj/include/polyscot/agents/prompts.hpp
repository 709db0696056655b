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

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "polyscot/core/error.hpp"

namespace polyscot::agents {

enum class AgentKind { CQ, CT, SCoT, Code };

inline constexpr std::string_view agent_kind_name(AgentKind k) {
  switch (k) {
    case AgentKind::CQ: return "CQAgent";
    case AgentKind::CT: return "CTAgent";
    case AgentKind::SCoT: return "SCoTAgent";
    case AgentKind::Code: return "CodeGen";
  }
  return "?";
}

class MissingBinding : public Error {
 public:
  explicit MissingBinding(const std::string& name)
      : Error("MissingBinding: no value bound for '{" + name + "}'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

namespace templates {

// Bumped whenever any template text below changes; recorded in provenance.
inline constexpr std::string_view kVersion = "1";

inline constexpr std::string_view kRole = "You are a helpful code assistant.";

inline constexpr std::string_view kCQ =
    "Task: Your task is to check if the given code has the education value and whether its quality meets "
    "textbook standards, and also check if you can generate a candidate code that matches the given code based "
    "on the docstring in the code.\n"
    "Return: Output True if both conditions are met, otherwise output False.\n"
    "Input:\n"
    "{code}\n"
    "Output:";

inline constexpr std::string_view kCT =
    "Task: Your task is to translate the following docstring and signature from {source_language} to "
    "{target_language}, which needs follow the format of given example code.\n"
    "[Signature Translation] translates function signatures between programming languages.\n"
    "[Docstring Translation] adapts docstrings to follow the target language's documentation conventions.\n"
    "Return: Only output the docstring and signature, no other information.\n"
    "Example Input:\n"
    "{example_input}\n"
    "Example Output:\n"
    "{example_output}\n"
    "Input:\n"
    "{input}\n"
    "Output:";

inline constexpr std::string_view kSCoT =
    "Task: Please understand the requirement and write a rough solving process.\n"
    "It starts with Let's think step by step and then a input-output structure.\n"
    "You should use three basic structures to build the solving process, including sequences, branches, and "
    "loops.\n"
    "The necessary details should writen in nature language.\n"
    "Return: Only output the solving process, no other information.\n"
    "Example Input:\n"
    "{demo_input}\n"
    "Example Output:\n"
    "{demo_output}\n"
    "Input:\n"
    "{input}\n"
    "Output:";

inline constexpr std::string_view kCode = "{prompt}";

// Training-time instruction (Role + Task lines) with the language named.
inline constexpr std::string_view kInstruction =
    "You are a helpful {language} code assistant.\n"
    "Please understand the requirement and write a rough solving process.";

// Demo pair shown to the SCoT agent.
inline constexpr std::string_view kSCoTDemoInput =
    "def sum_even(nums: List[int]) -> int:\n"
    "    '''\n"
    "    Return the sum of the even numbers in nums.\n"
    "    '''";

inline constexpr std::string_view kSCoTDemoOutput =
    "Let's think step by step.\n"
    "Input: nums, a list of integers\n"
    "Output: the sum of the even numbers in nums\n"
    "1. set total to 0\n"
    "2. for each n in nums:\n"
    "    3. if n is even:\n"
    "        4. add n to total\n"
    "5. return total";

}  // namespace templates

inline std::string_view template_for(AgentKind k) {
  switch (k) {
    case AgentKind::CQ: return templates::kCQ;
    case AgentKind::CT: return templates::kCT;
    case AgentKind::SCoT: return templates::kSCoT;
    case AgentKind::Code: return templates::kCode;
  }
  return {};
}

using Bindings = std::map<std::string, std::string>;

// Replaces every "{name}" with its binding. Unbound names throw; braces that
// do not enclose an identifier are copied through.
inline std::string substitute(std::string_view tmpl, const Bindings& b) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      std::size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        std::string_view name = tmpl.substr(i + 1, close - i - 1);
        bool ident = !name.empty();
        for (char c : name)
          if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) ident = false;
        if (ident) {
          auto it = b.find(std::string(name));
          if (it == b.end()) throw MissingBinding(std::string(name));
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

struct Prompt {
  std::string system;
  std::string user;
};

inline Prompt render_prompt(AgentKind kind, const Bindings& bindings) {
  return Prompt{std::string(templates::kRole), substitute(template_for(kind), bindings)};
}

}  // namespace polyscot::agents
