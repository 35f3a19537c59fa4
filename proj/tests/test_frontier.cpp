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

// O(n^2) reference: i survives unless another point weakly dominates it with
// one strict inequality, or duplicates it with a smaller (id, index).
std::set<std::size_t> dominance_oracle(const std::vector<ObjectivePoint>& p) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool dropped = false;
    for (std::size_t j = 0; j < p.size() && !dropped; ++j) {
      if (i == j) continue;
      const bool weak = p[j].accuracy >= p[i].accuracy && p[j].latency <= p[i].latency;
      const bool strict = p[j].accuracy > p[i].accuracy || p[j].latency < p[i].latency;
      const bool earlier = p[j].id < p[i].id || (p[j].id == p[i].id && j < i);
      if (weak && (strict || earlier)) dropped = true;
    }
    if (!dropped) out.insert(i);
  }
  return out;
}

std::set<std::size_t> as_set(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

TEST(Frontier, HandExample) {
  const std::vector<ObjectivePoint> p = {{0.9, 5, "a"}, {0.8, 6, "b"}, {0.95, 9, "c"}};
  EXPECT_EQ(nondominated_sort_2d(p), (std::vector<std::size_t>{0, 2}));
}

TEST(Frontier, IdenticalPointsKeepSmallestId) {
  const std::vector<ObjectivePoint> p = {{0.5, 1, "z"}, {0.5, 1, "b"}, {0.5, 1, "k"}};
  EXPECT_EQ(nondominated_sort_2d(p), (std::vector<std::size_t>{1}));
}

TEST(Frontier, NanRejected) {
  const std::vector<ObjectivePoint> p = {{std::nan(""), 1, "a"}};
  EXPECT_EQ(testing::error_code([&] { nondominated_sort_2d(p); }), "nan");
}

TEST(Frontier, EmptyInput) { EXPECT_TRUE(nondominated_sort_2d({}).empty()); }

TEST(Frontier, ThousandRandomPointsMatchOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> ids;
  std::vector<ObjectivePoint> p;
  for (int i = 0; i < 1000; ++i) ids.push_back("p" + std::to_string(i));
  for (int i = 0; i < 1000; ++i) p.push_back({u(rng), u(rng), ids[i]});
  EXPECT_EQ(as_set(nondominated_sort_2d(p)), dominance_oracle(p));
}

TEST(Frontier, QuantizedRandomWithTiesMatchOracle) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> g(0, 15);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::string> ids;
    std::vector<ObjectivePoint> p;
    const int n = 1 + t % 120;
    for (int i = 0; i < n; ++i) ids.push_back("c" + std::to_string(g(rng)));
    for (int i = 0; i < n; ++i) p.push_back({g(rng) / 15.0, g(rng) * 1.0, ids[i]});
    const auto got = nondominated_sort_2d(p);
    EXPECT_EQ(as_set(got), dominance_oracle(p));
    // Staircase order: latency and accuracy strictly increasing.
    for (std::size_t k = 1; k < got.size(); ++k) {
      EXPECT_LT(p[got[k - 1]].latency, p[got[k]].latency);
      EXPECT_LT(p[got[k - 1]].accuracy, p[got[k]].accuracy);
    }
    std::set<double> distinct;
    for (const auto& q : p) distinct.insert(q.accuracy);
    EXPECT_LE(got.size(), distinct.size());
  }
}

TEST(Frontier, PermutationInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> g(0, 9);
  std::vector<std::string> ids;
  for (int i = 0; i < 200; ++i) ids.push_back("id" + std::to_string(i));
  std::vector<ObjectivePoint> p;
  for (int i = 0; i < 200; ++i) p.push_back({g(rng) / 9.0, g(rng) * 1.0, ids[i]});
  auto frontier_ids = [](const std::vector<ObjectivePoint>& q) {
    std::vector<std::string_view> out;
    for (auto i : nondominated_sort_2d(q)) out.push_back(q[i].id);
    return out;
  };
  const auto base = frontier_ids(p);
  for (int t = 0; t < 20; ++t) {
    std::shuffle(p.begin(), p.end(), rng);
    EXPECT_EQ(frontier_ids(p), base);
  }
}

TEST(Frontier, EpsilonDropsNearTies) {
  const std::vector<ObjectivePoint> p = {{0.5, 1, "a"}, {0.505, 2, "b"}, {0.7, 3, "c"}};
  EXPECT_EQ(nondominated_sort_2d(p, 0.0).size(), 3u);
  EXPECT_EQ(nondominated_sort_2d(p, 0.01), (std::vector<std::size_t>{0, 2}));
}

}  // namespace
}  // namespace wfc
