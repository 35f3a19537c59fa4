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

// Seeded generators for small random workflows and profile tables, shared by
// the property tests and the acceptance binary.

#include <random>
#include <string>
#include <vector>

#include "wfc/wfc.hpp"

namespace wfc::testing {

struct RandomInstance {
  WorkflowSpec spec;
  ProfileTable table;
};

namespace detail {

// Random tree over the given leaves, each used exactly once.
inline Node random_tree_over(std::mt19937_64& rng, std::vector<Node> parts) {
  while (parts.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, parts.size() - 1);
    const std::size_t i = pick(rng);
    Node a = std::move(parts[i]);
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i));
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, parts.size() - 1)(rng);
    Node b = std::move(parts[j]);
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(j));
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: parts.push_back(Node::seq({std::move(a), std::move(b)})); break;
      case 1: parts.push_back(Node::any({std::move(a), std::move(b)})); break;
      case 2: parts.push_back(Node::all({std::move(a), std::move(b)})); break;
      default: parts.push_back(Node::cond(std::move(a), std::move(b))); break;
    }
  }
  return std::move(parts.front());
}

}  // namespace detail

// Desk-scale instance: up to `max_roles` roles, up to `max_options` configs
// per role, at most two structural choices (so at most four variants).
// Accuracy and latency are drawn on a coarse grid when `ties` is set, which
// produces exact duplicates and equal coordinates.
inline RandomInstance random_instance(std::uint64_t seed, int max_roles = 4, int max_options = 8, bool ties = false) {
  std::mt19937_64 rng(seed);
  RandomInstance out;
  out.spec.name = "random-" + std::to_string(seed);
  const int n_roles = std::uniform_int_distribution<int>(1, max_roles)(rng);
  const int n_choices = std::uniform_int_distribution<int>(0, std::min(2, n_roles))(rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> grid(0, 6);

  std::vector<Node> parts;
  for (int r = 0; r < n_roles; ++r) {
    const std::string role = "r" + std::to_string(r);
    const int n_opts = std::uniform_int_distribution<int>(1, max_options)(rng);
    RoleDecl decl{role, {}};
    for (int o = 0; o < n_opts; ++o) {
      const SubAgentConfig c{"m" + std::to_string(o % 3), 10 * (o / 3 + 1)};
      decl.config_space.push_back(c);
      const double acc = ties ? grid(rng) / 6.0 : u(rng);
      const double lat = ties ? 1.0 + grid(rng) : 0.1 + 10.0 * u(rng);
      out.table.add({role, c, acc, lat, 1});
    }
    std::sort(decl.config_space.begin(), decl.config_space.end());
    out.spec.roles.push_back(std::move(decl));
    Node leaf = Node::leaf(role);
    // The last roles become optional, one choice each.
    if (r >= n_roles - n_choices) {
      const std::string choice = "c" + std::to_string(r);
      out.spec.choices.push_back({choice, true});
      leaf = Node::optional(choice, std::move(leaf));
    }
    parts.push_back(std::move(leaf));
  }
  std::shuffle(parts.begin(), parts.end(), rng);
  out.spec.graph = detail::random_tree_over(rng, std::move(parts));
  // Every variant must keep at least one role; the always-present roles
  // guarantee that unless every role is optional.
  if (n_choices == n_roles) {
    std::vector<std::string> ids;
    for (const auto& c : out.spec.choices) ids.push_back(c.id);
    out.spec.constraints.push_back(AtLeastK{ids, 1});
  }
  validate(out.spec);
  return out;
}

// Frontier of the full declared space by brute force: every configuration
// materialized, estimated with the recursive evaluator, filtered pairwise.
inline std::vector<std::pair<double, double>> exhaustive_frontier(const WorkflowSpec& spec, const ProfileTable& table,
                                                                  ExecutionModel exec) {
  std::map<std::string, std::vector<SubAgentConfig>> opts;
  for (const auto& r : spec.roles) opts[r.id] = r.config_space;
  std::vector<Estimate> est;
  for (const auto& c : enumerate_configurations(spec, opts))
    est.push_back(estimate(spec, c.structural, c.assignment, table, exec));
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < est.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < est.size() && !dominated; ++j) {
      const bool weak = est[j].accuracy >= est[i].accuracy && est[j].latency <= est[i].latency;
      const bool strict = est[j].accuracy > est[i].accuracy || est[j].latency < est[i].latency;
      dominated = weak && strict;
    }
    if (!dominated) out.emplace_back(est[i].accuracy, est[i].latency);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<std::pair<double, double>> value_set(const CompiledSet& set) {
  std::vector<std::pair<double, double>> out;
  for (const auto& e : set.entries) out.emplace_back(e.estimate.accuracy, e.estimate.latency);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wfc::testing
