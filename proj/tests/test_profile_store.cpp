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

#include <random>
#include <set>

#include "test_util.hpp"

namespace wfc {
namespace {

using testing::error_code;

std::string entry(const std::string& role, const std::string& model, int budget, double acc, double lat) {
  return R"({"role":")" + role + R"(","model":")" + model + R"(","budget":)" + std::to_string(budget) +
         R"(,"accuracy":)" + std::to_string(acc) + R"(,"latency_s":)" + std::to_string(lat) + "}";
}

TEST(LoadProfiles, GridDocumentCountsMatchLineCounter) {
  const std::vector<int> budgets = {10, 200, 400, 800, 1000, 1500, 2000, 3000, 4000, 5000, 6000, 8000, 10000};
  std::string doc = R"({"format_version":1,"entries":[)";
  bool first = true;
  for (const char* role : {"programmer", "refiner", "generator_1"})
    for (int m = 0; m < 5; ++m)
      for (int b : budgets) {
        if (!first) doc += ",\n";
        first = false;
        doc += entry(role, "lm-" + std::to_string(m), b, 0.5, 1.0);
      }
  doc += "]}";
  // Independent count: one entry per line of the emitted document.
  const auto lines = static_cast<std::size_t>(std::count(doc.begin(), doc.end(), '\n')) + 1;
  const auto t = load_profiles(doc);
  EXPECT_EQ(t.size(), lines);
  EXPECT_EQ(t.size(), 195u);
}

TEST(LoadProfiles, EmptyEntriesIsValid) {
  const auto t = load_profiles(R"({"entries":[]})");
  EXPECT_TRUE(t.empty());
}

TEST(LoadProfiles, OutOfRangeAccuracyNamesKey) {
  try {
    load_profiles(R"({"entries":[)" + entry("gen", "lm-a", 10, 1.2, 1.0) + "]}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "range");
    EXPECT_NE(std::string(e.what()).find("(gen, lm-a@10)"), std::string::npos) << e.what();
  }
}

TEST(LoadProfiles, RejectsNegativeLatencyAndDuplicates) {
  EXPECT_EQ(error_code([] { load_profiles(R"({"entries":[)" + entry("g", "m", 1, 0.5, -1.0) + "]}"); }), "range");
  EXPECT_EQ(error_code([] {
              load_profiles(R"({"entries":[)" + entry("g", "m", 1, 0.5, 1.0) + "," + entry("g", "m", 1, 0.6, 2.0) + "]}");
            }),
            "duplicate_key");
  EXPECT_EQ(error_code([] { load_profiles(R"({"format_version":9,"entries":[]})"); }), "version");
}

TEST(LoadProfiles, CsvMatchesJson) {
  const auto a = load_profiles_file(testing::fixture("profiles/hotpotqa.csv"));
  const auto b = testing::load_table("hotpotqa");
  EXPECT_EQ(a.entries(), b.entries());
  EXPECT_EQ(a.size(), 5u * 5u * 16u);
}

TEST(LoadProfiles, CsvErrorsCarryLineNumbers) {
  try {
    load_profiles_csv("role,model,budget,accuracy,latency_s\ng,m,1,0.5,1\ng,m,2,abc,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_EQ(error_code([] { load_profiles_csv("role,model,accuracy\n"); }), "schema");
}

TEST(LoadProfiles, JsonRoundTrip) {
  const auto t = testing::load_table("livecodebench");
  EXPECT_EQ(load_profiles(save_profiles(t)), t);
}

TEST(ProfileTable, SuffixedRoleFallsBack) {
  const auto t = testing::load_table("livecodebench");
  const SubAgentConfig c{"lm-8b", 1000};
  EXPECT_EQ(&t.at("fix#2", c), &t.at("fix", c));
  EXPECT_EQ(error_code([&] { t.at("nobody", c); }), "missing_profile");
}

Profile prof(const std::string& model, std::int64_t budget, double acc, double lat) {
  return {"r", {model, budget}, acc, lat, 1};
}

TEST(PruneDominated, HandExample) {
  const auto p = prune_options("r", {prof("A", 1, 0.9, 5), prof("B", 1, 0.8, 6), prof("C", 1, 0.95, 9)});
  ASSERT_EQ(p.kept.size(), 2u);
  EXPECT_EQ(p.kept[0].config.model, "A");
  EXPECT_EQ(p.kept[1].config.model, "C");
  EXPECT_EQ(p.dropped_count, 1u);
}

TEST(PruneDominated, SingleProfileKept) {
  const auto p = prune_options("r", {prof("A", 1, 0.3, 2)});
  ASSERT_EQ(p.kept.size(), 1u);
  EXPECT_EQ(p.dropped_count, 0u);
}

TEST(PruneDominated, IdenticalProfilesKeepSmallerConfig) {
  const auto p = prune_options("r", {prof("m2", 5, 0.5, 1), prof("m1", 9, 0.5, 1)});
  ASSERT_EQ(p.kept.size(), 1u);
  EXPECT_EQ(p.kept[0].config, (SubAgentConfig{"m1", 9}));
}

TEST(PruneDominated, UnknownRole) {
  const auto t = testing::load_table("hotpotqa");
  EXPECT_EQ(error_code([&] { prune_dominated(t, "ghost"); }), "unknown_role");
}

// O(n^2) oracle: keep q unless some other profile is at least as good on both
// objectives and strictly better on one, or is an exact duplicate with a
// smaller config.
std::set<SubAgentConfig> oracle_keep(const std::vector<Profile>& v) {
  std::set<SubAgentConfig> out;
  for (const auto& q : v) {
    bool dropped = false;
    for (const auto& r : v) {
      if (&r == &q) continue;
      const bool weak = r.accuracy >= q.accuracy && r.latency <= q.latency;
      const bool strict = r.accuracy > q.accuracy || r.latency < q.latency;
      if ((weak && strict) || (!strict && weak && r.config < q.config)) dropped = true;
    }
    if (!dropped) out.insert(q.config);
  }
  return out;
}

TEST(PruneDominated, MatchesPairwiseOracleAndIsIdempotent) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> grid(0, 12);
  for (int t = 0; t < 300; ++t) {
    std::vector<Profile> v;
    const int n = 1 + t % 40;
    for (int i = 0; i < n; ++i) v.push_back(prof("m" + std::to_string(i), 1, grid(rng) / 12.0, grid(rng) * 0.5));
    const auto p = prune_options("r", v);
    std::set<SubAgentConfig> got;
    for (const auto& q : p.kept) got.insert(q.config);
    EXPECT_EQ(got, oracle_keep(v));
    EXPECT_EQ(p.kept.size() + p.dropped_count, v.size());
    EXPECT_EQ(prune_options("r", p.kept).kept, p.kept);
  }
}

TEST(PruneDominated, EpsilonThinsNearTies) {
  const std::vector<Profile> v = {prof("a", 1, 0.50, 1), prof("b", 1, 0.505, 2), prof("c", 1, 0.6, 3)};
  EXPECT_EQ(prune_options("r", v, 0.0).kept.size(), 3u);
  EXPECT_EQ(prune_options("r", v, 0.01).kept.size(), 2u);
  EXPECT_EQ(error_code([&] { prune_options("r", v, -1.0); }), "range");
}

TEST(ReductionReport, CountsPerRoleAndSpace) {
  // 65 options of which exactly 10 form the staircase.
  std::vector<Profile> v;
  for (int i = 0; i < 65; ++i) {
    const bool stair = i < 10;
    v.push_back(prof("m", i + 1, stair ? 0.5 + 0.04 * i : 0.1, stair ? 1.0 + i : 20.0 + i));
  }
  WorkflowSpec spec;
  spec.name = "one";
  spec.roles = {{"r", {}}};
  spec.graph = Node::leaf("r");
  const auto rep = reduction_report(spec, {{"r", 65}}, {{"r", prune_options("r", v)}});
  ASSERT_EQ(rep.roles.size(), 1u);
  EXPECT_EQ(rep.roles[0].before, 65u);
  EXPECT_EQ(rep.roles[0].after, 10u);
}

TEST(ReductionReport, ProductOverRoles) {
  WorkflowSpec spec;
  spec.name = "five";
  std::vector<Node> kids;
  std::map<std::string, std::size_t> before;
  std::map<std::string, PrunedOptionSet> after, ones;
  for (int i = 0; i < 5; ++i) {
    const std::string r = "r" + std::to_string(i);
    spec.roles.push_back({r, {}});
    kids.push_back(Node::leaf(r));
    before[r] = 20;
    PrunedOptionSet p;
    p.kept.resize(6);
    after[r] = p;
    p.kept.resize(1);
    ones[r] = p;
  }
  spec.graph = Node::seq(kids);
  const auto rep = reduction_report(spec, before, after);
  EXPECT_EQ(rep.pruned_space, 7776);
  EXPECT_EQ(rep.full_space, 3200000);
  EXPECT_EQ(reduction_report(spec, before, ones).pruned_space, 1);
}

TEST(DeclaredOptions, HoleIsReported) {
  const auto spec = testing::load_spec("hotpotqa_restricted");
  ProfileTable t = testing::load_table("hotpotqa_restricted");
  EXPECT_EQ(declared_options(spec, t, "generator_1").size(), 6u);
  ProfileTable holed;
  for (const auto& [k, p] : t.entries())
    if (!(k.role == "formatter" && k.config == SubAgentConfig{"lm-8b", 10000})) holed.add(p);
  try {
    declared_options(spec, holed, "formatter");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("(formatter, lm-8b@10000)"), std::string::npos);
  }
}

}  // namespace
}  // namespace wfc
