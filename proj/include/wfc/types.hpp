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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "wfc/error.hpp"

namespace wfc {

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kToolVersion = "0.3.0";

// One (model, reasoning budget) choice for a sub-agent role.
struct SubAgentConfig {
  std::string model;
  std::int64_t budget = 1;

  auto operator<=>(const SubAgentConfig&) const = default;
  bool operator==(const SubAgentConfig&) const = default;
};

inline std::string to_string(const SubAgentConfig& c) {
  return c.model + "@" + std::to_string(c.budget);
}

// Role, choice and model names end up inside canonical configuration ids, so
// the separators used there are reserved.
inline bool is_id_token(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' || ch == '.';
    if (!ok) return false;
  }
  return true;
}

inline bool is_model_token(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (ch <= ' ' || ch == ',' || ch == '=' || ch == '@' || ch == '|' || ch == ';' || ch == '"')
      return false;
  }
  return true;
}

inline void check_config(const SubAgentConfig& c, const std::string& where) {
  if (!is_model_token(c.model)) fail_input("bad_model", where + ": invalid model name '" + c.model + "'");
  if (c.budget < 1) fail_input("bad_budget", where + ": budget must be >= 1, got " + std::to_string(c.budget));
}

// Unrolled repair stages carry a depth suffix ("fix#2"); profiles and
// config spaces are declared on the base id.
inline std::string_view base_role(std::string_view role) {
  const auto pos = role.find('#');
  return pos == std::string_view::npos ? role : role.substr(0, pos);
}

}  // namespace wfc
