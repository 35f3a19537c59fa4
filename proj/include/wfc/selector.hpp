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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfc/error.hpp"
#include "wfc/explorer.hpp"
#include "wfc/rng.hpp"

namespace wfc {

// Accuracy weight alpha in the open interval (0, 1).
class Preference {
 public:
  explicit Preference(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) fail_input("range", "preference alpha must lie in (0, 1)");
  }
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

// Latency normalization constant for one comparison scope.
class UtilityContext {
 public:
  explicit UtilityContext(double l_max) : l_max_(l_max) {
    if (!(l_max > 0.0) || !std::isfinite(l_max)) fail_input("range", "l_max must be a positive finite number");
  }
  double l_max() const { return l_max_; }

 private:
  double l_max_;
};

inline double latency_efficiency(double latency, const UtilityContext& ctx) {
  if (!(latency >= 0.0)) fail_input("range", "latency must be >= 0");
  if (latency > ctx.l_max()) fail_input("lmax_violation", "latency exceeds l_max");
  return 1.0 - latency / ctx.l_max();
}

inline double expected_utility(double accuracy, double latency, const Preference& pref, const UtilityContext& ctx) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) fail_input("range", "accuracy must lie in [0, 1]");
  const double a = pref.alpha();
  return a * accuracy + (1.0 - a) * latency_efficiency(latency, ctx);
}

// Most accurate entry whose estimated latency fits the budget. On a staircase
// that is the last entry with latency <= budget.
inline const CompiledEntry& select_latency_constrained(const CompiledSet& set, double budget) {
  if (set.entries.empty()) fail_input("empty_set", "compiled set is empty");
  const auto it = std::upper_bound(set.entries.begin(), set.entries.end(), budget,
                                   [](double b, const CompiledEntry& e) { return b < e.estimate.latency; });
  if (it == set.entries.begin())
    fail_infeasible("infeasible_budget", "infeasible budget: no configuration has estimated latency <= " +
                                             std::to_string(budget) + " s");
  return *std::prev(it);
}

namespace detail {

// Strictly better: higher utility, then lower latency, then smaller id.
inline bool better_choice(double u, const CompiledEntry& e, double best_u, const CompiledEntry& best) {
  if (u != best_u) return u > best_u;
  if (e.estimate.latency != best.estimate.latency) return e.estimate.latency < best.estimate.latency;
  return e.config.id < best.config.id;
}

inline void check_lmax(const CompiledSet& set, const UtilityContext& ctx) {
  for (const auto& e : set.entries)
    if (e.estimate.latency > ctx.l_max())
      fail_input("lmax_violation", "entry '" + e.config.id + "' has estimated latency above l_max");
}

}  // namespace detail

// argmax of proxy utility over the set.
inline const CompiledEntry& select_by_preference(const CompiledSet& set, const Preference& pref,
                                                 const UtilityContext& ctx) {
  if (set.entries.empty()) fail_input("empty_set", "compiled set is empty");
  detail::check_lmax(set, ctx);
  const CompiledEntry* best = &set.entries.front();
  double best_u = expected_utility(best->estimate.accuracy, best->estimate.latency, pref, ctx);
  for (const auto& e : set.entries) {
    const double u = expected_utility(e.estimate.accuracy, e.estimate.latency, pref, ctx);
    if (detail::better_choice(u, e, best_u, *best)) {
      best = &e;
      best_u = u;
    }
  }
  return *best;
}

inline std::vector<double> default_alpha_grid() {
  std::vector<double> out;
  for (int k = 1; k <= 19; ++k) out.push_back(k / 20.0);
  return out;
}

struct SweepRow {
  double alpha;
  std::string selected_id;
  double proxy_utility;
};

inline std::vector<SweepRow> sweep_fixed(const CompiledSet& set, const UtilityContext& ctx,
                                         const std::vector<double>& alphas = default_alpha_grid()) {
  std::vector<SweepRow> out;
  for (double a : alphas) {
    const Preference pref(a);
    const auto& e = select_by_preference(set, pref, ctx);
    out.push_back({a, e.config.id, expected_utility(e.estimate.accuracy, e.estimate.latency, pref, ctx)});
  }
  return out;
}

struct MeasuredPerformance {
  double accuracy;
  double latency;
};

struct HeterogeneousResult {
  double mean = 0.0;
  double std = 0.0;
  bool degenerate_std = false;  // repetitions == 1
  std::vector<double> per_repetition;
};

// Each query draws its own alpha ~ U(0,1); the configuration is chosen on
// proxy estimates and the utility is scored on measured values.
inline HeterogeneousResult evaluate_heterogeneous(const CompiledSet& set, const UtilityContext& ctx,
                                                  const std::map<std::string, MeasuredPerformance>& measured,
                                                  std::uint64_t n_queries, std::uint64_t repetitions,
                                                  std::uint64_t seed) {
  if (n_queries < 1) fail_input("range", "n_queries must be >= 1");
  if (repetitions < 1) fail_input("range", "repetitions must be >= 1");
  HeterogeneousResult out;
  for (std::uint64_t rep = 0; rep < repetitions; ++rep) {
    CounterRng rng = CounterRng::keyed(seed, rep, 0x68657465726fULL);
    double total = 0.0;
    for (std::uint64_t q = 0; q < n_queries; ++q) {
      const Preference pref(rng.uniform());
      const auto& e = select_by_preference(set, pref, ctx);
      const auto it = measured.find(e.config.id);
      if (it == measured.end()) fail_input("missing_measurement", "no measured values for selected '" + e.config.id + "'");
      total += expected_utility(it->second.accuracy, it->second.latency, pref, ctx);
    }
    out.per_repetition.push_back(total / static_cast<double>(n_queries));
  }
  const double n = static_cast<double>(repetitions);
  for (double v : out.per_repetition) out.mean += v;
  out.mean /= n;
  if (repetitions == 1) {
    out.degenerate_std = true;
  } else {
    double ss = 0.0;
    for (double v : out.per_repetition) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-query routing

struct RecordOutcome {
  bool success = false;
  double latency = 0.0;
};

struct RoutingRecord {
  std::vector<double> features;
  std::map<std::string, RecordOutcome> outcomes;  // config id -> outcome
};

struct RoutingRecords {
  std::size_t dim = 0;
  std::vector<RoutingRecord> records;
};

inline RoutingRecords routing_records_from_json(const json& doc) {
  using detail::JsonPath;
  const JsonPath root;
  RoutingRecords out;
  const auto dim = detail::int_field(doc, "dim", root);
  if (dim < 1) detail::fail_at(root.at("dim"), "range", "dim must be >= 1");
  out.dim = static_cast<std::size_t>(dim);
  const json& recs = detail::array_field(doc, "records", root);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto p = root.at("records").at(i);
    RoutingRecord r;
    const json& f = detail::array_field(recs[i], "features", p);
    for (const auto& x : f) {
      if (!x.is_number()) detail::fail_at(p.at("features"), "schema", "features must be numbers");
      r.features.push_back(x.get<double>());
    }
    if (r.features.size() != out.dim)
      detail::fail_at(p.at("features"), "dimension_mismatch",
                      "expected " + std::to_string(out.dim) + " features, got " + std::to_string(r.features.size()));
    const json& o = detail::field(recs[i], "outcomes", p);
    if (!o.is_object()) detail::fail_at(p.at("outcomes"), "schema", "expected an object");
    for (const auto& [id, v] : o.items()) {
      const auto op = p.at("outcomes").at(id);
      const json& s = detail::field(v, "success", op);
      if (!s.is_boolean()) detail::fail_at(op.at("success"), "schema", "expected a boolean");
      const double lat = detail::field(v, "latency_s", op).get<double>();
      if (!(lat >= 0.0)) detail::fail_at(op.at("latency_s"), "range", "latency must be >= 0");
      r.outcomes[id] = {s.get<bool>(), lat};
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

inline RoutingRecords load_routing_records(std::string_view text) {
  return routing_records_from_json(detail::parse_json_text(text, "routing records"));
}

struct RouteResult {
  const CompiledEntry* entry = nullptr;
  double utility = 0.0;  // neighbor-mean utility of the chosen entry
  std::size_t k_used = 0;
  std::optional<std::string> warning;
};

// k nearest records (Euclidean, ties by record index); each compiled entry is
// scored by the mean utility of its outcomes over those neighbors, and the
// best entry wins (ties: lower estimated latency, then smaller id). Entries
// with no outcome among the neighbors are not eligible.
inline RouteResult knn_route(const std::vector<double>& query, const RoutingRecords& records, const CompiledSet& set,
                             std::size_t k, const Preference& pref, const UtilityContext& ctx) {
  if (k < 1) fail_input("range", "k must be >= 1");
  if (records.records.empty()) fail_input("empty_records", "no routing records");
  if (set.entries.empty()) fail_input("empty_set", "compiled set is empty");
  if (query.size() != records.dim)
    fail_input("dimension_mismatch", "query has " + std::to_string(query.size()) + " features, records have " +
                                         std::to_string(records.dim));
  for (const auto& r : records.records)
    for (const auto& [id, o] : r.outcomes)
      if (set.find(id) == nullptr) fail_input("unknown_config", "routing record names unknown config '" + id + "'");

  RouteResult out;
  if (k > records.records.size()) {
    out.warning = "k=" + std::to_string(k) + " exceeds " + std::to_string(records.records.size()) +
                  " records; clamped";
    k = records.records.size();
  }
  out.k_used = k;

  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(records.records.size());
  for (std::size_t i = 0; i < records.records.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < query.size(); ++j) {
      const double x = query[j] - records.records[i].features[j];
      d += x * x;
    }
    dist.emplace_back(d, i);
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

  double best_u = 0.0;
  for (const auto& e : set.entries) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& rec = records.records[dist[i].second];
      const auto it = rec.outcomes.find(e.config.id);
      if (it == rec.outcomes.end()) continue;
      sum += expected_utility(it->second.success ? 1.0 : 0.0, it->second.latency, pref, ctx);
      ++n;
    }
    if (n == 0) continue;
    const double u = sum / static_cast<double>(n);
    if (out.entry == nullptr || detail::better_choice(u, e, best_u, *out.entry)) {
      out.entry = &e;
      best_u = u;
    }
  }
  if (out.entry == nullptr) fail_infeasible("no_candidates", "no compiled entry has outcomes among the neighbors");
  out.utility = best_u;
  return out;
}

}  // namespace wfc
