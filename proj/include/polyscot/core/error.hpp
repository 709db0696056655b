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

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyscot {

// Root of every exception thrown by the library. The CLI maps these onto
// exit codes; callers that care about the cause catch the module type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An error tagged with a module-specific kind enum. `Names` supplies
// `static std::string_view name(Kind)` so messages carry the kind name.
template <typename Kind, typename Names>
class KindedError : public Error {
 public:
  KindedError(Kind kind, const std::string& detail)
      : Error(std::string(Names::name(kind)) + ": " + detail), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }
  std::string_view kind_name() const noexcept { return Names::name(kind_); }

 private:
  Kind kind_;
};

}  // namespace polyscot
