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

#include <cmath>

#include "test_util.hpp"

namespace wfc {
namespace {

using testing::error_code;

CompiledSet staircase(const std::vector<std::pair<double, double>>& pts) {
  CompiledSet s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CompiledEntry e;
    e.config.id = "c" + std::to_string(i);
    e.config.assignment = {{"r", {"m", static_cast<std::int64_t>(i + 1)}}};
    e.estimate = {pts[i].first, pts[i].second};
    s.entries.push_back(e);
  }
  return s;
}

const CompiledSet kThree = staircase({{0.6, 1.0}, {0.9, 5.0}, {0.95, 9.0}});

TEST(Utility, LatencyEfficiency) {
  const UtilityContext ctx(100.0);
  EXPECT_DOUBLE_EQ(latency_efficiency(25.0, ctx), 0.75);
  EXPECT_EQ(latency_efficiency(0.0, ctx), 1.0);
  EXPECT_EQ(latency_efficiency(100.0, ctx), 0.0);
  EXPECT_EQ(error_code([&] { latency_efficiency(100.5, ctx); }), "lmax_violation");
  EXPECT_EQ(error_code([] { UtilityContext bad(0.0); }), "range");
}

TEST(Utility, ExpectedUtility) {
  const UtilityContext ctx(100.0);
  EXPECT_NEAR(expected_utility(0.9, 25.0, Preference(0.6), ctx), 0.6 * 0.9 + 0.4 * 0.75, 1e-15);
  EXPECT_NEAR(expected_utility(0.9, 25.0, Preference(0.6), ctx), 0.84, 1e-12);
  for (double a : {0.01, 0.5, 0.99}) EXPECT_EQ(expected_utility(1.0, 0.0, Preference(a), ctx), 1.0);
  EXPECT_EQ(error_code([] { Preference p(0.0); }), "range");
  EXPECT_EQ(error_code([] { Preference p(1.0); }), "range");
  EXPECT_EQ(error_code([&] { expected_utility(1.1, 0.0, Preference(0.5), ctx); }), "range");
}

TEST(LatencyConstrained, BudgetSelection) {
  EXPECT_EQ(select_latency_constrained(kThree, 6.0).config.id, "c1");
  EXPECT_EQ(select_latency_constrained(kThree, 5.0).config.id, "c1");
  EXPECT_EQ(select_latency_constrained(kThree, 100.0).config.id, "c2");
  try {
    select_latency_constrained(kThree, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.exit_code(), 3);
    EXPECT_NE(std::string(e.what()).find("infeasible budget"), std::string::npos);
  }
}

TEST(LatencyConstrained, MatchesLinearScanOnFixture) {
  const auto spec = testing::load_spec("hotpotqa");
  const auto set = explore(spec, testing::load_table("hotpotqa"), ExecutionModel::kSequentialEdge);
  for (double b = set.entries.front().estimate.latency; b < set.entries.back().estimate.latency * 1.1; b *= 1.07) {
    const CompiledEntry* best = nullptr;
    for (const auto& e : set.entries)
      if (e.estimate.latency <= b && (best == nullptr || e.estimate.accuracy > best->estimate.accuracy)) best = &e;
    ASSERT_NE(best, nullptr);
    EXPECT_EQ(select_latency_constrained(set, b).config.id, best->config.id) << b;
  }
}

TEST(Preference, LimitsOnTwoPoints) {
  const auto two = staircase({{0.6, 1.0}, {0.9, 5.0}});
  const UtilityContext ctx(10.0);
  EXPECT_EQ(select_by_preference(two, Preference(0.01), ctx).config.id, "c0");
  EXPECT_EQ(select_by_preference(two, Preference(0.99), ctx).config.id, "c1");
}

TEST(Preference, MatchesExhaustiveScan) {
  const UtilityContext ctx(10.0);
  for (double a = 0.02; a < 1.0; a += 0.03) {
    const Preference p(a);
    const auto& sel = select_by_preference(kThree, p, ctx);
    const double su = expected_utility(sel.estimate.accuracy, sel.estimate.latency, p, ctx);
    for (const auto& e : kThree.entries) EXPECT_LE(expected_utility(e.estimate.accuracy, e.estimate.latency, p, ctx), su);
  }
  // At alpha 0.5: utilities 0.75, 0.7, 0.525.
  EXPECT_EQ(select_by_preference(kThree, Preference(0.5), ctx).config.id, "c0");
  EXPECT_EQ(error_code([&] { select_by_preference(kThree, Preference(0.5), UtilityContext(8.0)); }), "lmax_violation");
}

TEST(Preference, TiesPreferLowerLatencyThenId) {
  // alpha 0.5, l_max 8: both score exactly 0.625.
  const auto s = staircase({{0.5, 2.0}, {0.75, 4.0}});
  const UtilityContext ctx(8.0);
  ASSERT_EQ(expected_utility(0.5, 2.0, Preference(0.5), ctx), expected_utility(0.75, 4.0, Preference(0.5), ctx));
  EXPECT_EQ(select_by_preference(s, Preference(0.5), ctx).config.id, "c0");
}

TEST(Sweep, DefaultGridAndMonotonicity) {
  const auto grid = default_alpha_grid();
  ASSERT_EQ(grid.size(), 19u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.05);
  EXPECT_DOUBLE_EQ(grid.back(), 0.95);
  const auto set = explore(testing::load_spec("math"), testing::load_table("math"), ExecutionModel::kSequentialEdge);
  const UtilityContext ctx(set.entries.back().estimate.latency);
  const auto rows = sweep_fixed(set, ctx);
  ASSERT_EQ(rows.size(), 19u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto* a = set.find(rows[i - 1].selected_id);
    const auto* b = set.find(rows[i].selected_id);
    EXPECT_LE(a->estimate.accuracy, b->estimate.accuracy);
    EXPECT_LE(a->estimate.latency, b->estimate.latency);
  }
  EXPECT_NE(rows.front().selected_id, rows.back().selected_id);
}

TEST(Sweep, SingletonPicksTheSameEntry) {
  const auto one = staircase({{0.7, 3.0}});
  for (const auto& r : sweep_fixed(one, UtilityContext(10.0))) EXPECT_EQ(r.selected_id, "c0");
}

std::map<std::string, MeasuredPerformance> as_measured(const CompiledSet& s) {
  std::map<std::string, MeasuredPerformance> m;
  for (const auto& e : s.entries) m[e.config.id] = {e.estimate.accuracy, e.estimate.latency};
  return m;
}

TEST(Heterogeneous, SingletonMatchesClosedForm) {
  const auto one = staircase({{0.9, 4.0}});
  const UtilityContext ctx(10.0);
  const std::uint64_t n = 5000, reps = 10;
  const auto r = evaluate_heterogeneous(one, ctx, as_measured(one), n, reps, 11);
  // U = LES + alpha (A - LES) with alpha ~ U(0,1).
  const double acc = 0.9, les = 0.6;
  const double se = std::abs(acc - les) / std::sqrt(12.0 * static_cast<double>(n * reps));
  EXPECT_LE(std::abs(r.mean - (acc + les) / 2.0), 3.0 * se);
  EXPECT_EQ(r.per_repetition.size(), reps);
  EXPECT_GT(r.std, 0.0);
  EXPECT_FALSE(r.degenerate_std);
}

TEST(Heterogeneous, ReproducibleAndSeedSensitive) {
  const UtilityContext ctx(10.0);
  const auto a = evaluate_heterogeneous(kThree, ctx, as_measured(kThree), 1000, 10, 5);
  const auto b = evaluate_heterogeneous(kThree, ctx, as_measured(kThree), 1000, 10, 5);
  EXPECT_EQ(a.per_repetition, b.per_repetition);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std, b.std);
  EXPECT_NE(evaluate_heterogeneous(kThree, ctx, as_measured(kThree), 1000, 10, 6).mean, a.mean);
}

TEST(Heterogeneous, SingleRepetitionFlagsDegenerateStd) {
  const auto r = evaluate_heterogeneous(kThree, UtilityContext(10.0), as_measured(kThree), 100, 1, 1);
  EXPECT_TRUE(r.degenerate_std);
  EXPECT_EQ(r.std, 0.0);
}

TEST(Heterogeneous, SelectionUsesProxyOnly) {
  // Middle entry never wins on proxy utility (it would need alpha > 0.976
  // against the first and alpha < 0.227 against the third).
  const auto s = staircase({{0.6, 1.0}, {0.61, 5.0}, {0.95, 6.0}});
  const UtilityContext ctx(10.0);
  auto measured = as_measured(s);
  const auto base = evaluate_heterogeneous(s, ctx, measured, 2000, 3, 9);
  measured["c1"] = {1.0, 0.0};
  const auto same = evaluate_heterogeneous(s, ctx, measured, 2000, 3, 9);
  EXPECT_EQ(same.per_repetition, base.per_repetition);
  measured["c2"] = {0.5, 9.0};
  EXPECT_LT(evaluate_heterogeneous(s, ctx, measured, 2000, 3, 9).mean, base.mean);
  measured.erase("c0");
  EXPECT_EQ(error_code([&] { evaluate_heterogeneous(s, ctx, measured, 2000, 3, 9); }), "missing_measurement");
}

// Records: three near the origin where c0 succeeds fast, three near (10,10)
// where only c2 succeeds.
RoutingRecords two_clusters() {
  RoutingRecords r;
  r.dim = 2;
  for (int i = 0; i < 3; ++i)
    r.records.push_back({{0.1 * i, 0.0}, {{"c0", {true, 1.0}}, {"c1", {true, 5.0}}, {"c2", {false, 9.0}}}});
  for (int i = 0; i < 3; ++i)
    r.records.push_back({{10.0, 10.0 + 0.1 * i}, {{"c0", {false, 1.0}}, {"c1", {false, 5.0}}, {"c2", {true, 9.0}}}});
  return r;
}

TEST(Knn, ClusterPreferredConfig) {
  const auto recs = two_clusters();
  const UtilityContext ctx(10.0);
  const Preference p(0.7);
  EXPECT_EQ(knn_route({0.0, 0.0}, recs, kThree, 3, p, ctx).entry->config.id, "c0");
  const auto far = knn_route({10.0, 10.1}, recs, kThree, 3, p, ctx);
  EXPECT_EQ(far.entry->config.id, "c2");
  EXPECT_NEAR(far.utility, 0.7 + 0.3 * 0.1, 1e-12);
  EXPECT_FALSE(far.warning.has_value());
}

TEST(Knn, FullNeighborhoodEqualsGlobalScan) {
  const auto recs = two_clusters();
  const UtilityContext ctx(10.0);
  for (double a : {0.1, 0.5, 0.9}) {
    const Preference p(a);
    std::string best;
    double best_u = -1.0;
    for (const auto& e : kThree.entries) {
      double u = 0.0;
      for (const auto& r : recs.records) {
        const auto& o = r.outcomes.at(e.config.id);
        u += expected_utility(o.success ? 1.0 : 0.0, o.latency, p, ctx);
      }
      u /= static_cast<double>(recs.records.size());
      if (u > best_u) {
        best_u = u;
        best = e.config.id;
      }
    }
    EXPECT_EQ(knn_route({5.0, 5.0}, recs, kThree, recs.records.size(), p, ctx).entry->config.id, best) << a;
  }
}

TEST(Knn, KOneCoincidentRecord) {
  const auto recs = two_clusters();
  const auto r = knn_route({10.0, 10.2}, recs, kThree, 1, Preference(0.5), UtilityContext(10.0));
  EXPECT_EQ(r.entry->config.id, "c2");
  EXPECT_EQ(r.k_used, 1u);
}

TEST(Knn, OversizedKIsClampedWithWarning) {
  const auto r = knn_route({0.0, 0.0}, two_clusters(), kThree, 50, Preference(0.5), UtilityContext(10.0));
  EXPECT_EQ(r.k_used, 6u);
  ASSERT_TRUE(r.warning.has_value());
  EXPECT_NE(r.warning->find("clamped"), std::string::npos);
}

TEST(Knn, InputErrors) {
  const auto recs = two_clusters();
  const UtilityContext ctx(10.0);
  EXPECT_EQ(error_code([&] { knn_route({0.0}, recs, kThree, 1, Preference(0.5), ctx); }), "dimension_mismatch");
  EXPECT_EQ(error_code([&] { knn_route({0.0, 0.0}, recs, kThree, 0, Preference(0.5), ctx); }), "range");
  auto bad = recs;
  bad.records[0].outcomes["ghost"] = {true, 1.0};
  EXPECT_EQ(error_code([&] { knn_route({0.0, 0.0}, bad, kThree, 1, Preference(0.5), ctx); }), "unknown_config");
  EXPECT_EQ(error_code([] { load_routing_records(R"({"dim":2,"records":[{"features":[1],"outcomes":{}}]})"); }),
            "dimension_mismatch");
  const auto parsed = load_routing_records(
      R"({"dim":1,"records":[{"features":[0.5],"outcomes":{"c0":{"success":true,"latency_s":1.5}}}]})");
  EXPECT_EQ(parsed.records.at(0).outcomes.at("c0").latency, 1.5);
}

}  // namespace
}  // namespace wfc
