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

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polyscot/core/error.hpp"

namespace polyscot::scot {

struct ScotNode;
using NodeList = std::vector<ScotNode>;

struct Step {
  std::string text;
  friend bool operator==(const Step&, const Step&) = default;
};

struct Branch {
  std::string condition;
  NodeList then_body;
  NodeList else_body;
  friend bool operator==(const Branch&, const Branch&) = default;
};

struct Loop {
  std::string header;
  NodeList body;
  friend bool operator==(const Loop&, const Loop&) = default;
};

struct ScotNode {
  std::variant<Step, Branch, Loop> v;

  ScotNode(Step s) : v(std::move(s)) {}
  ScotNode(Branch b) : v(std::move(b)) {}
  ScotNode(Loop l) : v(std::move(l)) {}

  bool is_step() const { return std::holds_alternative<Step>(v); }
  bool is_branch() const { return std::holds_alternative<Branch>(v); }
  bool is_loop() const { return std::holds_alternative<Loop>(v); }
  const Step& step() const { return std::get<Step>(v); }
  const Branch& branch() const { return std::get<Branch>(v); }
  const Loop& loop() const { return std::get<Loop>(v); }
  Step& step() { return std::get<Step>(v); }
  Branch& branch() { return std::get<Branch>(v); }
  Loop& loop() { return std::get<Loop>(v); }

  friend bool operator==(const ScotNode&, const ScotNode&) = default;
};

inline constexpr std::string_view kPreamble = "Let's think step by step.";

struct ScotDocument {
  std::string input_spec;
  std::string output_spec;
  NodeList body;
  friend bool operator==(const ScotDocument&, const ScotDocument&) = default;
};

enum class ScotErrorKind { MissingPreamble, MissingIOSpec, IndentationError, EmptyBody, InvalidDocument };

struct ScotErrorNames {
  static constexpr std::string_view name(ScotErrorKind k) {
    switch (k) {
      case ScotErrorKind::MissingPreamble: return "MissingPreamble";
      case ScotErrorKind::MissingIOSpec: return "MissingIOSpec";
      case ScotErrorKind::IndentationError: return "IndentationError";
      case ScotErrorKind::EmptyBody: return "EmptyBody";
      case ScotErrorKind::InvalidDocument: return "InvalidDocument";
    }
    return "?";
  }
};

class ScotError : public KindedError<ScotErrorKind, ScotErrorNames> {
 public:
  ScotError(ScotErrorKind kind, std::size_t line, const std::string& detail)
      : KindedError(kind, line ? "line " + std::to_string(line) + ": " + detail : detail), line_(line) {}

  // 1-based; 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace polyscot::scot
