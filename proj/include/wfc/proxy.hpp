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
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wfc/error.hpp"
#include "wfc/profile_store.hpp"
#include "wfc/types.hpp"
#include "wfc/workflow_ir.hpp"

namespace wfc {

// How LLM calls of logically parallel branches are scheduled.
enum class ExecutionModel {
  kSequentialEdge,  // one device, calls queued: parallel branches add up
  kCriticalPath,    // branches run concurrently: parallel branches take the max
};

inline std::string_view to_string(ExecutionModel e) {
  return e == ExecutionModel::kSequentialEdge ? "sequential-edge" : "critical-path";
}

inline ExecutionModel parse_execution_model(std::string_view s) {
  if (s == "sequential-edge") return ExecutionModel::kSequentialEdge;
  if (s == "critical-path") return ExecutionModel::kCriticalPath;
  fail_input("bad_exec_model", "unknown execution model '" + std::string(s) + "'");
}

struct Estimate {
  double accuracy = 0.0;
  double latency = 0.0;
  bool operator==(const Estimate&) const = default;
};

using RoleAssignment = std::map<std::string, SubAgentConfig>;

inline constexpr std::string_view kProxyVersion = "analytic-1";

// Composition rules. Every rule is written as a chain of operations that are
// monotone under IEEE rounding (products of [0,1] values, 1 - x, sums of
// nonnegatives), so improving a leaf can never make an estimate worse even by
// one ulp. Cond accuracy p1 + (1-p1)p2 is evaluated as 1 - (1-p1)(1-p2).
namespace rules {

inline double both(double a, double b) { return a * b; }
inline double either(double a, double b) { return 1.0 - (1.0 - a) * (1.0 - b); }
inline double fallback_latency(double primary_latency, double primary_accuracy, double fallback_latency) {
  return primary_latency + (1.0 - primary_accuracy) * fallback_latency;
}

}  // namespace rules

// Recursive evaluation; `leaf(role)` yields the (accuracy, latency) profile.
template <class LeafFn>
Estimate evaluate(const Node& g, LeafFn&& leaf, ExecutionModel exec) {
  using K = Node::Kind;
  switch (g.kind) {
    case K::kLeaf: return leaf(g.role);
    case K::kSeq:
    case K::kAnd:
    case K::kOr: {
      // Folding from the first child keeps a single-child composite bit-equal to its child.
      Estimate out = evaluate(g.children.front(), leaf, exec);
      for (std::size_t i = 1; i < g.children.size(); ++i) {
        const Estimate e = evaluate(g.children[i], leaf, exec);
        out.accuracy = g.kind == K::kOr ? rules::either(out.accuracy, e.accuracy) : rules::both(out.accuracy, e.accuracy);
        if (g.kind != K::kSeq && exec == ExecutionModel::kCriticalPath)
          out.latency = std::max(out.latency, e.latency);
        else
          out.latency += e.latency;
      }
      return out;
    }
    case K::kCond: {
      const Estimate p = evaluate(g.children[0], leaf, exec);
      const Estimate f = evaluate(g.children[1], leaf, exec);
      return {rules::either(p.accuracy, f.accuracy), rules::fallback_latency(p.latency, p.accuracy, f.latency)};
    }
    case K::kLoop: fail_input("loop_node", "loop node encountered; unroll loops before estimating");
    case K::kOptional: fail_input("optional_node", "optional node encountered; instantiate the structure first");
  }
  fail_internal("bad_node", "unhandled node kind");
}

namespace detail {

inline auto table_leaf(const RoleAssignment& assignment, const ProfileTable& table) {
  return [&](const std::string& role) -> Estimate {
    const auto it = assignment.find(role);
    if (it == assignment.end()) fail_input("unassigned_role", "no config assigned to role '" + role + "'");
    const Profile& p = table.at(role, it->second);
    return {p.accuracy, p.latency};
  };
}

}  // namespace detail

inline double estimate_accuracy(const Node& graph, const RoleAssignment& assignment, const ProfileTable& table) {
  return evaluate(graph, detail::table_leaf(assignment, table), ExecutionModel::kSequentialEdge).accuracy;
}

inline double estimate_latency(const Node& graph, const RoleAssignment& assignment, const ProfileTable& table,
                               ExecutionModel exec) {
  return evaluate(graph, detail::table_leaf(assignment, table), exec).latency;
}

// Full pipeline for one configuration: constraint check, instantiate the
// structure, check the assignment covers exactly the active roles, evaluate.
inline Estimate estimate(const WorkflowSpec& spec, const StructuralAssignment& structure,
                         const RoleAssignment& assignment, const ProfileTable& table, ExecutionModel exec) {
  for (const auto& c : spec.choices)
    if (!structure.count(c.id)) fail_input("unknown_choice", "structural assignment is missing choice '" + c.id + "'");
  if (structure.size() != spec.choices.size())
    fail_input("unknown_choice", "structural assignment names undeclared choices");
  if (!spec.satisfies_constraints(structure)) fail_input("constraint_violated", "constraint violated");
  const auto g = instantiate(spec, structure);
  if (!g) fail_input("empty_workflow", "structure leaves no executable sub-agent");
  auto active = leaves(*g);
  std::sort(active.begin(), active.end());
  std::vector<std::string> assigned;
  for (const auto& [r, c] : assignment) assigned.push_back(r);
  if (active != assigned) fail_input("assignment_mismatch", "assignment does not cover exactly the active roles");
  return evaluate(*g, detail::table_leaf(assignment, table), exec);
}

// Flattened evaluator used on the hot enumeration path: one node per slot in
// post-order, leaves index into caller-provided (accuracy, latency) arrays.
class FlatGraph {
 public:
  FlatGraph() = default;

  // `slot_of(role)` maps each leaf to its index in the value arrays.
  template <class SlotFn>
  FlatGraph(const Node& g, SlotFn&& slot_of, ExecutionModel exec) : exec_(exec) {
    build(g, slot_of);
  }

  Estimate operator()(std::span<const double> acc, std::span<const double> lat) const {
    // Post-order: every child precedes its parent, the root is last.
    thread_local std::vector<Estimate> val;
    val.resize(ops_.size());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      const Op& op = ops_[i];
      switch (op.kind) {
        case Node::Kind::kLeaf: val[i] = {acc[op.slot], lat[op.slot]}; break;
        case Node::Kind::kCond: {
          const Estimate& p = val[kids_[op.first]];
          const Estimate& f = val[kids_[op.first + 1]];
          val[i] = {rules::either(p.accuracy, f.accuracy), rules::fallback_latency(p.latency, p.accuracy, f.latency)};
          break;
        }
        default: {
          const bool is_or = op.kind == Node::Kind::kOr;
          const bool take_max = op.kind != Node::Kind::kSeq && exec_ == ExecutionModel::kCriticalPath;
          Estimate out = val[kids_[op.first]];
          for (std::uint32_t k = op.first + 1; k < op.last; ++k) {
            const Estimate& e = val[kids_[k]];
            out.accuracy = is_or ? rules::either(out.accuracy, e.accuracy) : rules::both(out.accuracy, e.accuracy);
            out.latency = take_max ? std::max(out.latency, e.latency) : out.latency + e.latency;
          }
          val[i] = out;
        }
      }
    }
    return val.back();
  }

 private:
  struct Op {
    Node::Kind kind;
    std::uint32_t slot = 0;
    std::uint32_t first = 0, last = 0;  // range in kids_
  };

  template <class SlotFn>
  std::uint32_t build(const Node& g, SlotFn& slot_of) {
    if (g.kind == Node::Kind::kLoop || g.kind == Node::Kind::kOptional)
      fail_input("unexpanded_node", "flat evaluation needs an instantiated, unrolled graph");
    std::vector<std::uint32_t> child_ids;
    for (const auto& c : g.children) child_ids.push_back(build(c, slot_of));
    Op op{g.kind};
    if (g.kind == Node::Kind::kLeaf) op.slot = static_cast<std::uint32_t>(slot_of(g.role));
    op.first = static_cast<std::uint32_t>(kids_.size());
    kids_.insert(kids_.end(), child_ids.begin(), child_ids.end());
    op.last = static_cast<std::uint32_t>(kids_.size());
    ops_.push_back(op);
    return static_cast<std::uint32_t>(ops_.size() - 1);
  }

  ExecutionModel exec_ = ExecutionModel::kSequentialEdge;
  std::vector<Op> ops_;
  std::vector<std::uint32_t> kids_;
};

}  // namespace wfc
