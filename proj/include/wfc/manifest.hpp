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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfc/error.hpp"
#include "wfc/hash.hpp"
#include "wfc/profile_store.hpp"
#include "wfc/types.hpp"

namespace wfc {

// Reproducibility envelope written next to every command output.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> inputs;  // path -> sha256
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> settings;  // flags such as exec model, epsilon
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;

  void add_input(const std::string& path) { inputs[path] = sha256_hex(read_file(path)); }
};

inline json to_json(const RunManifest& m) {
  return {{"format_version", kFormatVersion},
          {"tool_version", kToolVersion},
          {"command", m.command},
          {"inputs", m.inputs},
          {"seeds", m.seeds},
          {"settings", m.settings},
          {"outputs", m.outputs},
          {"wall_time_s", m.wall_time_s}};
}

inline RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
  m.seeds = j.at("seeds").get<std::map<std::string, std::uint64_t>>();
  m.settings = j.at("settings").get<std::map<std::string, std::string>>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.wall_time_s = j.at("wall_time_s").get<double>();
  return m;
}

// Inputs whose current content no longer matches the recorded hash.
inline std::vector<std::string> stale_inputs(const RunManifest& m) {
  std::vector<std::string> out;
  for (const auto& [path, hash] : m.inputs) {
    std::string now;
    try {
      now = sha256_hex(read_file(path));
    } catch (const Error&) {
      now.clear();
    }
    if (now != hash) out.push_back(path);
  }
  return out;
}

}  // namespace wfc
