// Copyright 2026 The wfc Authors
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
#include <utility>

namespace wfc {

// Process exit codes double as error categories.
enum class ErrorKind : int {
  kInput = 2,       // malformed or inconsistent input
  kInfeasible = 3,  // well-formed request with no admissible answer
  kInternal = 4,    // invariant violation inside the library
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short machine-readable tag, e.g. "unknown_role".
  const std::string& code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] inline void fail_input(std::string code, const std::string& message) {
  throw Error(ErrorKind::kInput, std::move(code), message);
}

[[noreturn]] inline void fail_infeasible(std::string code, const std::string& message) {
  throw Error(ErrorKind::kInfeasible, std::move(code), message);
}

[[noreturn]] inline void fail_internal(std::string code, const std::string& message) {
  throw Error(ErrorKind::kInternal, std::move(code), message);
}

}  // namespace wfc
