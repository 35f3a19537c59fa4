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

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wfc/manifest.hpp"

namespace wfc {
namespace {

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Manifest, RoundTripAndStaleDetection) {
  const std::string path = ::testing::TempDir() + "/wfc_manifest_input.txt";
  write_file(path, "alpha");
  RunManifest m;
  m.command = "compile";
  m.add_input(path);
  m.seeds["simulate"] = 42;
  m.settings["exec"] = "sequential-edge";
  m.outputs = {"out.json"};
  m.wall_time_s = 1.25;
  EXPECT_EQ(m.inputs.at(path), sha256_hex("alpha"));

  const auto back = manifest_from_json(json::parse(to_json(m).dump()));
  EXPECT_EQ(back.command, m.command);
  EXPECT_EQ(back.inputs, m.inputs);
  EXPECT_EQ(back.seeds, m.seeds);
  EXPECT_EQ(back.settings, m.settings);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_EQ(back.wall_time_s, m.wall_time_s);
  EXPECT_EQ(to_json(m).at("tool_version"), kToolVersion);

  EXPECT_TRUE(stale_inputs(back).empty());
  write_file(path, "beta");
  EXPECT_EQ(stale_inputs(back), std::vector<std::string>{path});
  std::remove(path.c_str());
  EXPECT_EQ(stale_inputs(back), std::vector<std::string>{path});
}

}  // namespace
}  // namespace wfc
