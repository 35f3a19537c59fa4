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
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfc/error.hpp"
#include "wfc/explorer.hpp"
#include "wfc/frontier.hpp"
#include "wfc/profile_store.hpp"
#include "wfc/proxy.hpp"
#include "wfc/rng.hpp"
#include "wfc/workflow_ir.hpp"

namespace wfc {

enum class LatencyModel { kDeterministic, kLogNormal };

inline std::string_view to_string(LatencyModel m) {
  return m == LatencyModel::kDeterministic ? "deterministic" : "lognormal";
}

inline LatencyModel parse_latency_model(std::string_view s) {
  if (s == "deterministic") return LatencyModel::kDeterministic;
  if (s == "lognormal") return LatencyModel::kLogNormal;
  fail_input("schema", "unknown latency model '" + std::string(s) + "'");
}

// Ground truth for one (role, config): success probability and a latency
// distribution with the given median.
struct TruthEntry {
  double success_prob = 0.0;
  double latency = 0.0;
  LatencyModel model = LatencyModel::kDeterministic;
  double cv = 0.0;
  bool operator==(const TruthEntry&) const = default;
};

struct TruthScenario {
  std::map<ProfileKey, TruthEntry> entries;
  // Probability that all leaves of one query share a single latent draw.
  double correlation = 0.0;
  std::uint64_t seed = 0;
  bool operator==(const TruthScenario&) const = default;

  const TruthEntry& at(std::string_view role, const SubAgentConfig& c) const {
    auto it = entries.find(ProfileKey{std::string(role), c});
    if (it == entries.end()) it = entries.find(ProfileKey{std::string(base_role(role)), c});
    if (it == entries.end())
      fail_input("missing_scenario", "scenario has no entry for " + to_string(ProfileKey{std::string(role), c}));
    return it->second;
  }

  void validate() const {
    if (!(correlation >= 0.0 && correlation < 1.0)) fail_input("range", "correlation must lie in [0, 1)");
    for (const auto& [k, e] : entries) {
      if (!(e.success_prob >= 0.0 && e.success_prob <= 1.0))
        fail_input("range", "success probability outside [0,1] for " + to_string(k));
      if (!(e.latency >= 0.0) || !std::isfinite(e.latency)) fail_input("range", "bad latency for " + to_string(k));
      if (!(e.cv >= 0.0) || !std::isfinite(e.cv)) fail_input("range", "cv must be >= 0 for " + to_string(k));
    }
  }
};

// Scenario whose truth equals the profiles: the setting in which the proxy's
// independence idealization holds exactly when correlation = 0.
inline TruthScenario scenario_from_profiles(const ProfileTable& t, std::uint64_t seed, double correlation = 0.0,
                                            LatencyModel model = LatencyModel::kDeterministic, double cv = 0.0) {
  TruthScenario s;
  s.seed = seed;
  s.correlation = correlation;
  for (const auto& [k, p] : t.entries()) s.entries[k] = {p.accuracy, p.latency, model, cv};
  s.validate();
  return s;
}

// Profile-table layout plus latency_model / cv / correlation / seed, either
// top-level defaults or per-entry overrides for latency_model and cv.
inline TruthScenario scenario_from_json(const json& doc) {
  using detail::JsonPath;
  const JsonPath root;
  TruthScenario s;
  if (doc.contains("format_version") && detail::int_field(doc, "format_version", root) != kFormatVersion)
    fail_input("version", "unsupported scenario format_version");
  const LatencyModel model =
      doc.contains("latency_model") ? parse_latency_model(detail::string_field(doc, "latency_model", root))
                                    : LatencyModel::kDeterministic;
  const double cv = doc.contains("cv") ? doc.at("cv").get<double>() : 0.0;
  s.correlation = doc.contains("correlation") ? doc.at("correlation").get<double>() : 0.0;
  s.seed = doc.contains("seed") ? doc.at("seed").get<std::uint64_t>() : 0;
  const ProfileTable t = profiles_from_json(doc);
  const json& entries = doc.at("entries");
  std::size_t i = 0;
  for (const auto& [k, p] : t.entries()) s.entries[k] = {p.accuracy, p.latency, model, cv};
  for (const auto& e : entries) {
    const auto p = root.at("entries").at(i++);
    ProfileKey k{detail::string_field(e, "role", p), {detail::string_field(e, "model", p), detail::int_field(e, "budget", p)}};
    auto& te = s.entries.at(k);
    if (e.contains("latency_model")) te.model = parse_latency_model(detail::string_field(e, "latency_model", p));
    if (e.contains("cv")) te.cv = e.at("cv").get<double>();
  }
  s.validate();
  return s;
}

inline TruthScenario load_scenario(std::string_view text) {
  return scenario_from_json(detail::parse_json_text(text, "scenario"));
}

inline json to_json(const TruthScenario& s) {
  json entries = json::array();
  for (const auto& [k, e] : s.entries)
    entries.push_back({{"role", k.role},
                       {"model", k.config.model},
                       {"budget", k.config.budget},
                       {"accuracy", e.success_prob},
                       {"latency_s", e.latency},
                       {"latency_model", to_string(e.model)},
                       {"cv", e.cv}});
  return {{"format_version", kFormatVersion}, {"correlation", s.correlation}, {"seed", s.seed}, {"entries", entries}};
}

struct Outcome {
  bool success = false;
  double latency = 0.0;
};

// A configuration bound to its truth entries, ready to execute many queries.
class SimulationPlan {
 public:
  SimulationPlan(const Node& graph, const RoleAssignment& assignment, const TruthScenario& scenario,
                 std::string_view config_id, ExecutionModel exec)
      : graph_(&graph), scenario_(&scenario), exec_(exec), config_hash_(fnv1a64(config_id)) {
    for (const auto& role : leaves(graph)) {
      const auto it = assignment.find(role);
      if (it == assignment.end()) fail_input("unassigned_role", "no config assigned to role '" + role + "'");
      truth_[role] = Bound{&scenario.at(role, it->second), fnv1a64(role)};
    }
  }

  Outcome run(std::uint64_t query) const {
    CounterRng shared = CounterRng::keyed(scenario_->seed, config_hash_, query, kSharedStream);
    const bool coupled = shared.uniform() < scenario_->correlation;
    const double latent = shared.uniform();
    return exec(*graph_, query, coupled, latent);
  }

 private:
  struct Bound {
    const TruthEntry* truth;
    std::uint64_t role_hash;
  };
  static constexpr std::uint64_t kSharedStream = 0x5eed5eed5eed5eedULL;

  Outcome exec(const Node& g, std::uint64_t query, bool coupled, double latent) const {
    using K = Node::Kind;
    switch (g.kind) {
      case K::kLeaf: {
        const Bound& b = truth_.at(g.role);
        CounterRng rng = CounterRng::keyed(scenario_->seed, config_hash_, query, b.role_hash);
        const double u = rng.uniform();
        Outcome o{(coupled ? latent : u) < b.truth->success_prob, b.truth->latency};
        if (b.truth->model == LatencyModel::kLogNormal && b.truth->cv > 0.0) {
          const double sigma = std::sqrt(std::log1p(b.truth->cv * b.truth->cv));
          o.latency = b.truth->latency * std::exp(sigma * rng.normal());
        }
        return o;
      }
      case K::kSeq:
      case K::kAnd:
      case K::kOr: {
        const bool is_or = g.kind == K::kOr;
        const bool take_max = g.kind != K::kSeq && exec_ == ExecutionModel::kCriticalPath;
        Outcome out{!is_or, 0.0};
        for (const auto& c : g.children) {
          const Outcome o = exec(c, query, coupled, latent);
          out.success = is_or ? (out.success || o.success) : (out.success && o.success);
          out.latency = take_max ? std::max(out.latency, o.latency) : out.latency + o.latency;
        }
        return out;
      }
      case K::kCond: {
        const Outcome p = exec(g.children[0], query, coupled, latent);
        if (p.success) return p;
        const Outcome f = exec(g.children[1], query, coupled, latent);
        return {f.success, p.latency + f.latency};
      }
      default: fail_input("unexpanded_node", "simulation needs an instantiated, unrolled graph");
    }
  }

  const Node* graph_;
  const TruthScenario* scenario_;
  ExecutionModel exec_;
  std::uint64_t config_hash_;
  std::map<std::string, Bound> truth_;
};

inline Outcome simulate_once(const Node& graph, const RoleAssignment& assignment, const TruthScenario& scenario,
                             std::string_view config_id, std::uint64_t query_index,
                             ExecutionModel exec = ExecutionModel::kSequentialEdge) {
  return SimulationPlan(graph, assignment, scenario, config_id, exec).run(query_index);
}

struct MeasuredPoint {
  std::string config_id;
  double accuracy = 0.0;
  double latency = 0.0;  // mean seconds
  std::uint64_t n_samples = 0;
  std::optional<double> accuracy_se;  // undefined for n = 1
  std::optional<double> latency_se;
};

inline MeasuredPoint measure(const Node& graph, const RoleAssignment& assignment, std::string_view config_id,
                             const TruthScenario& scenario, std::uint64_t n_samples,
                             ExecutionModel exec = ExecutionModel::kSequentialEdge) {
  if (n_samples < 1) fail_input("range", "n_samples must be >= 1");
  const SimulationPlan plan(graph, assignment, scenario, config_id, exec);
  std::uint64_t successes = 0;
  // Welford for the latency mean and variance.
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t q = 0; q < n_samples; ++q) {
    const Outcome o = plan.run(q);
    successes += o.success ? 1 : 0;
    const double d = o.latency - mean;
    mean += d / static_cast<double>(q + 1);
    m2 += d * (o.latency - mean);
  }
  MeasuredPoint out;
  out.config_id = std::string(config_id);
  out.n_samples = n_samples;
  out.accuracy = static_cast<double>(successes) / static_cast<double>(n_samples);
  out.latency = mean;
  if (n_samples > 1) {
    const double n = static_cast<double>(n_samples);
    out.accuracy_se = std::sqrt(out.accuracy * (1.0 - out.accuracy) / n);
    out.latency_se = std::sqrt(m2 / (n - 1.0) / n);
  }
  return out;
}

inline MeasuredPoint measure(const WorkflowSpec& spec, const WorkflowConfiguration& config,
                             const TruthScenario& scenario, std::uint64_t n_samples,
                             ExecutionModel exec = ExecutionModel::kSequentialEdge) {
  const auto g = instantiate(spec, config.structural);
  if (!g) fail_input("empty_workflow", "configuration '" + config.id + "' has no executable sub-agent");
  return measure(*g, config.assignment, config.id, scenario, n_samples, exec);
}

// Measures many configurations, split across workers; each result depends
// only on its own configuration.
inline std::vector<MeasuredPoint> measure_all(const WorkflowSpec& spec,
                                              const std::vector<WorkflowConfiguration>& configs,
                                              const TruthScenario& scenario, std::uint64_t n_samples,
                                              ExecutionModel exec, unsigned workers = 1) {
  std::vector<MeasuredPoint> out(configs.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, configs.size()))));
  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < configs.size(); i += workers) out[i] = measure(spec, configs[i], scenario, n_samples, exec);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  return out;
}

struct BruteForceOptions {
  std::size_t cap = 1000;
  unsigned workers = 1;
  // Per-role config overrides; roles not listed use their declared space.
  std::map<std::string, std::vector<SubAgentConfig>> restriction;
};

struct BruteForceResult {
  std::vector<WorkflowConfiguration> configs;  // canonical enumeration order
  std::vector<MeasuredPoint> points;           // parallel to configs
  std::vector<Estimate> estimates;             // parallel to configs when a profile table was given
  std::vector<std::size_t> frontier;           // indices into configs, latency ascending
};

inline std::map<std::string, std::vector<SubAgentConfig>> space_options(
    const WorkflowSpec& spec, const std::map<std::string, std::vector<SubAgentConfig>>& restriction = {}) {
  std::map<std::string, std::vector<SubAgentConfig>> out;
  for (const auto& r : spec.roles) out[r.id] = r.config_space;
  for (const auto& [r, cs] : restriction) {
    if (!out.count(std::string(base_role(r)))) fail_input("unknown_role", "restriction names unknown role '" + r + "'");
    out[r] = cs;
  }
  return out;
}

// Exhaustively measures a (restricted) space and extracts the measured
// frontier.
inline BruteForceResult brute_force_frontier(const WorkflowSpec& spec, const ProfileTable* table,
                                             const TruthScenario& scenario, ExecutionModel exec,
                                             std::uint64_t n_samples, const BruteForceOptions& opt = {}) {
  const auto options = space_options(spec, opt.restriction);
  const BigCount size = count_configurations(spec, [&] {
    std::map<std::string, std::size_t> c;
    for (const auto& [r, cs] : options) c[r] = cs.size();
    return c;
  }());
  if (size > opt.cap)
    fail_infeasible("space_too_large",
                    "restricted space has " + size.str() + " configurations, above the cap of " + std::to_string(opt.cap));
  BruteForceResult out;
  out.configs = enumerate_configurations(spec, options, opt.cap);
  out.points = measure_all(spec, out.configs, scenario, n_samples, exec, opt.workers);
  if (table != nullptr)
    for (const auto& c : out.configs) out.estimates.push_back(estimate(spec, c.structural, c.assignment, *table, exec));
  std::vector<ObjectivePoint> pts;
  for (const auto& m : out.points) pts.push_back({m.accuracy, m.latency, m.config_id});
  out.frontier = nondominated_sort_2d(pts);
  return out;
}

}  // namespace wfc
