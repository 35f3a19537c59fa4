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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfc/error.hpp"
#include "wfc/types.hpp"

namespace wfc {

using json = nlohmann::json;

// Composition tree over sub-agent roles.
//
// Children layout by kind:
//   kSeq/kOr/kAnd  children = branches (>= 1)
//   kCond          children = {primary, fallback}
//   kLoop          children = {body}, stages = repair stages
//   kOptional      children = {child}, guarded by `choice`
struct Node {
  enum class Kind { kLeaf, kSeq, kOr, kAnd, kCond, kLoop, kOptional };

  Kind kind = Kind::kLeaf;
  std::string role;
  std::string choice;
  std::vector<Node> children;
  std::vector<Node> stages;
  int max_retries = 0;

  bool operator==(const Node&) const = default;

  static Node leaf(std::string role) {
    Node n;
    n.role = std::move(role);
    return n;
  }
  static Node seq(std::vector<Node> c) { return composite(Kind::kSeq, std::move(c)); }
  static Node any(std::vector<Node> c) { return composite(Kind::kOr, std::move(c)); }
  static Node all(std::vector<Node> c) { return composite(Kind::kAnd, std::move(c)); }
  static Node cond(Node primary, Node fallback) {
    std::vector<Node> c;
    c.push_back(std::move(primary));
    c.push_back(std::move(fallback));
    return composite(Kind::kCond, std::move(c));
  }
  static Node loop(Node body, std::vector<Node> repair_stages, int max_retries) {
    Node n = composite(Kind::kLoop, {});
    n.children.push_back(std::move(body));
    n.stages = std::move(repair_stages);
    n.max_retries = max_retries;
    return n;
  }
  static Node optional(std::string choice, Node child) {
    Node n = composite(Kind::kOptional, {});
    n.choice = std::move(choice);
    n.children.push_back(std::move(child));
    return n;
  }

 private:
  static Node composite(Kind k, std::vector<Node> c) {
    Node n;
    n.kind = k;
    n.children = std::move(c);
    return n;
  }
};

inline std::string_view kind_name(Node::Kind k) {
  switch (k) {
    case Node::Kind::kLeaf: return "leaf";
    case Node::Kind::kSeq: return "seq";
    case Node::Kind::kOr: return "or";
    case Node::Kind::kAnd: return "and";
    case Node::Kind::kCond: return "cond";
    case Node::Kind::kLoop: return "loop";
    case Node::Kind::kOptional: return "optional";
  }
  return "?";
}

using StructuralAssignment = std::map<std::string, bool>;

// Boolean predicate over structural choices.
struct Predicate {
  enum class Op { kChoice, kNot, kAll, kAny };
  Op op = Op::kChoice;
  std::string choice;
  std::vector<Predicate> args;

  bool operator==(const Predicate&) const = default;

  bool eval(const StructuralAssignment& a) const {
    switch (op) {
      case Op::kChoice: return a.at(choice);
      case Op::kNot: return !args.front().eval(a);
      case Op::kAll:
        return std::all_of(args.begin(), args.end(), [&](const Predicate& p) { return p.eval(a); });
      case Op::kAny:
        return std::any_of(args.begin(), args.end(), [&](const Predicate& p) { return p.eval(a); });
    }
    return false;
  }
};

// At least k of `choices` are on.
struct AtLeastK {
  std::vector<std::string> choices;
  int k = 0;
  bool operator==(const AtLeastK&) const = default;
};

// condition => target.
struct ImpliedBy {
  std::string target;
  Predicate condition;
  bool operator==(const ImpliedBy&) const = default;
};

// target is on exactly when at least k of `choices` are on (the
// aggregation-stage rule: run only with two or more active branches).
struct RequiresCountGE {
  std::string target;
  std::vector<std::string> choices;
  int k = 0;
  bool operator==(const RequiresCountGE&) const = default;
};

using Constraint = std::variant<AtLeastK, ImpliedBy, RequiresCountGE>;

inline int count_on(const std::vector<std::string>& ids, const StructuralAssignment& a) {
  return static_cast<int>(std::count_if(ids.begin(), ids.end(), [&](const std::string& id) { return a.at(id); }));
}

inline bool satisfied(const Constraint& c, const StructuralAssignment& a) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AtLeastK>) {
          return count_on(v.choices, a) >= v.k;
        } else if constexpr (std::is_same_v<T, ImpliedBy>) {
          return !v.condition.eval(a) || a.at(v.target);
        } else {
          return a.at(v.target) == (count_on(v.choices, a) >= v.k);
        }
      },
      c);
}

struct ChoiceDecl {
  std::string id;
  bool default_value = true;
  bool operator==(const ChoiceDecl&) const = default;
};

struct RoleDecl {
  std::string id;
  std::vector<SubAgentConfig> config_space;  // sorted, unique
  bool operator==(const RoleDecl&) const = default;
};

struct WorkflowSpec {
  std::string name;
  Node graph;
  std::vector<ChoiceDecl> choices;
  std::vector<Constraint> constraints;
  std::vector<RoleDecl> roles;

  bool operator==(const WorkflowSpec&) const = default;

  const RoleDecl* find_role(std::string_view id) const {
    for (const auto& r : roles)
      if (r.id == id) return &r;
    return nullptr;
  }

  // Config space of a (possibly depth-suffixed) role.
  const std::vector<SubAgentConfig>& config_space(std::string_view role) const {
    const RoleDecl* r = find_role(role);
    if (r == nullptr) r = find_role(base_role(role));
    if (r == nullptr) fail_input("unknown_role", "unknown role '" + std::string(role) + "'");
    return r->config_space;
  }

  StructuralAssignment default_structure() const {
    StructuralAssignment a;
    for (const auto& c : choices) a[c.id] = c.default_value;
    return a;
  }

  bool satisfies_constraints(const StructuralAssignment& a) const {
    return std::all_of(constraints.begin(), constraints.end(),
                       [&](const Constraint& c) { return satisfied(c, a); });
  }
};

// ---------------------------------------------------------------------------
// Graph transforms

inline void collect_leaves(const Node& n, std::vector<std::string>& out) {
  if (n.kind == Node::Kind::kLeaf) {
    out.push_back(n.role);
    return;
  }
  for (const auto& c : n.children) collect_leaves(c, out);
  for (const auto& s : n.stages) collect_leaves(s, out);
}

inline std::vector<std::string> leaves(const Node& n) {
  std::vector<std::string> out;
  collect_leaves(n, out);
  return out;
}

namespace detail {

inline Node suffix_leaves(Node n, int depth) {
  if (n.kind == Node::Kind::kLeaf) {
    n.role += "#" + std::to_string(depth);
    return n;
  }
  for (auto& c : n.children) c = suffix_leaves(std::move(c), depth);
  for (auto& s : n.stages) s = suffix_leaves(std::move(s), depth);
  return n;
}

}  // namespace detail

// Rewrites every Loop(body, stages, k) as the left-nested chain
// Cond(...Cond(Cond(body, stage1#1), stage2#2)..., stagek#k). Stage i runs only
// when everything before it failed, which is exactly the retry semantics
// with a perfect (zero-latency) failure signal.
inline Node unroll_loops(const Node& g) {
  if (g.kind == Node::Kind::kLeaf) return g;
  if (g.kind == Node::Kind::kLoop) {
    if (g.max_retries < 0) fail_input("bad_loop", "loop max_retries must be >= 0");
    if (static_cast<std::size_t>(g.max_retries) > g.stages.size())
      fail_input("bad_loop", "loop max_retries " + std::to_string(g.max_retries) + " exceeds " +
                                 std::to_string(g.stages.size()) + " declared repair stages");
    Node out = unroll_loops(g.children.front());
    for (int i = 0; i < g.max_retries; ++i)
      out = Node::cond(std::move(out), detail::suffix_leaves(unroll_loops(g.stages[i]), i + 1));
    return out;
  }
  Node out = g;
  for (auto& c : out.children) c = unroll_loops(c);
  return out;
}

// Drops Optional subtrees whose choice is off. Composites that lose all
// children disappear; a Cond missing one side collapses to the other; a Loop
// keeps its surviving repair stages and clamps max_retries to their count.
inline std::optional<Node> prune_inactive(const Node& g, const StructuralAssignment& a) {
  using K = Node::Kind;
  switch (g.kind) {
    case K::kLeaf: return g;
    case K::kOptional: {
      const auto it = a.find(g.choice);
      if (it == a.end()) fail_input("unknown_choice", "unknown choice '" + g.choice + "'");
      if (!it->second) return std::nullopt;
      return prune_inactive(g.children.front(), a);
    }
    case K::kSeq:
    case K::kOr:
    case K::kAnd: {
      Node out;
      out.kind = g.kind;
      for (const auto& c : g.children)
        if (auto p = prune_inactive(c, a)) out.children.push_back(std::move(*p));
      if (out.children.empty()) return std::nullopt;
      return out;
    }
    case K::kCond: {
      auto primary = prune_inactive(g.children[0], a);
      auto fallback = prune_inactive(g.children[1], a);
      if (!primary) return fallback;
      if (!fallback) return primary;
      return Node::cond(std::move(*primary), std::move(*fallback));
    }
    case K::kLoop: {
      auto body = prune_inactive(g.children.front(), a);
      if (!body) return std::nullopt;
      std::vector<Node> stages;
      for (const auto& s : g.stages)
        if (auto p = prune_inactive(s, a)) stages.push_back(std::move(*p));
      const int retries = std::min<int>(g.max_retries, static_cast<int>(stages.size()));
      return Node::loop(std::move(*body), std::move(stages), retries);
    }
  }
  return std::nullopt;
}

// The executable residual graph for one structural assignment.
inline std::optional<Node> instantiate(const WorkflowSpec& spec, const StructuralAssignment& a) {
  auto pruned = prune_inactive(spec.graph, a);
  if (!pruned) return std::nullopt;
  return unroll_loops(*pruned);
}

// ---------------------------------------------------------------------------
// Structural enumeration

struct StructuralVariant {
  StructuralAssignment choices;
  Node graph;                             // pruned + unrolled
  std::vector<std::string> active_roles;  // sorted
};

struct StructureEnumeration {
  std::vector<StructuralVariant> variants;
  // Constraint-satisfying assignments that leave no executable graph.
  std::size_t empty_variants = 0;
  bool unsatisfiable = false;
};

inline constexpr std::size_t kMaxStructuralChoices = 24;

// All constraint-satisfying assignments in lexicographic order over the
// choice ids (false < true, earlier id more significant).
inline StructureEnumeration enumerate_structures(const WorkflowSpec& spec) {
  std::vector<std::string> ids;
  for (const auto& c : spec.choices) ids.push_back(c.id);
  std::sort(ids.begin(), ids.end());
  if (ids.size() > kMaxStructuralChoices)
    fail_input("too_many_choices", "at most " + std::to_string(kMaxStructuralChoices) + " structural choices supported");

  StructureEnumeration out;
  const std::uint64_t total = std::uint64_t{1} << ids.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    StructuralAssignment a;
    for (std::size_t i = 0; i < ids.size(); ++i) a[ids[i]] = ((mask >> (ids.size() - 1 - i)) & 1u) != 0;
    if (!spec.satisfies_constraints(a)) continue;
    auto g = instantiate(spec, a);
    if (!g) {
      ++out.empty_variants;
      continue;
    }
    StructuralVariant v{std::move(a), std::move(*g), {}};
    v.active_roles = leaves(v.graph);
    std::sort(v.active_roles.begin(), v.active_roles.end());
    out.variants.push_back(std::move(v));
  }
  out.unsatisfiable = out.variants.empty();
  return out;
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace detail {

struct JsonPath {
  std::string path;
  JsonPath at(std::string_view key) const { return {path + "/" + std::string(key)}; }
  JsonPath at(std::size_t i) const { return {path + "/" + std::to_string(i)}; }
  std::string str() const { return path.empty() ? "/" : path; }
};

[[noreturn]] inline void fail_at(const JsonPath& p, const std::string& code, const std::string& msg) {
  fail_input(code, "at " + p.str() + ": " + msg);
}

inline const json& field(const json& obj, std::string_view key, const JsonPath& p) {
  if (!obj.is_object()) fail_at(p, "schema", "expected an object");
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) fail_at(p, "schema", "missing field '" + std::string(key) + "'");
  return *it;
}

inline std::string string_field(const json& obj, std::string_view key, const JsonPath& p) {
  const json& v = field(obj, key, p);
  if (!v.is_string()) fail_at(p.at(key), "schema", "expected a string");
  return v.get<std::string>();
}

inline std::int64_t int_field(const json& obj, std::string_view key, const JsonPath& p) {
  const json& v = field(obj, key, p);
  if (!v.is_number_integer()) fail_at(p.at(key), "schema", "expected an integer");
  return v.get<std::int64_t>();
}

inline const json& array_field(const json& obj, std::string_view key, const JsonPath& p) {
  const json& v = field(obj, key, p);
  if (!v.is_array()) fail_at(p.at(key), "schema", "expected an array");
  return v;
}

// Parses text, turning syntax errors into line/column diagnostics.
inline json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail_input("syntax", std::string(what) + " syntax error at line " + std::to_string(line) + ", column " +
                             std::to_string(col) + " (byte " + std::to_string(e.byte) + "): " + e.what());
  }
}

inline Node node_from_json(const json& j, const JsonPath& p) {
  const std::string kind = string_field(j, "kind", p);
  auto child_list = [&](std::string_view key) {
    const json& arr = array_field(j, key, p);
    std::vector<Node> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(node_from_json(arr[i], p.at(key).at(i)));
    return out;
  };
  if (kind == "leaf") return Node::leaf(string_field(j, "role", p));
  if (kind == "seq" || kind == "or" || kind == "and") {
    auto c = child_list("children");
    if (c.empty()) fail_at(p, "schema", kind + " node needs at least one child");
    if (kind == "seq") return Node::seq(std::move(c));
    if (kind == "or") return Node::any(std::move(c));
    return Node::all(std::move(c));
  }
  if (kind == "cond")
    return Node::cond(node_from_json(field(j, "primary", p), p.at("primary")),
                      node_from_json(field(j, "fallback", p), p.at("fallback")));
  if (kind == "loop") {
    const auto k = int_field(j, "max_retries", p);
    if (k < 0) fail_at(p.at("max_retries"), "bad_loop", "max_retries must be >= 0");
    auto stages = child_list("repair_stages");
    if (static_cast<std::size_t>(k) > stages.size())
      fail_at(p.at("max_retries"), "bad_loop",
              "max_retries " + std::to_string(k) + " exceeds " + std::to_string(stages.size()) + " repair stages");
    return Node::loop(node_from_json(field(j, "body", p), p.at("body")), std::move(stages), static_cast<int>(k));
  }
  if (kind == "optional")
    return Node::optional(string_field(j, "choice", p), node_from_json(field(j, "child", p), p.at("child")));
  fail_at(p.at("kind"), "schema", "unknown node kind '" + kind + "'");
}

inline Predicate predicate_from_json(const json& j, const JsonPath& p) {
  if (j.is_string()) return Predicate{Predicate::Op::kChoice, j.get<std::string>(), {}};
  if (!j.is_object() || j.size() != 1) fail_at(p, "schema", "predicate must be a choice id or a one-key object");
  Predicate out;
  if (j.contains("choice")) {
    out.op = Predicate::Op::kChoice;
    out.choice = string_field(j, "choice", p);
  } else if (j.contains("not")) {
    out.op = Predicate::Op::kNot;
    out.args.push_back(predicate_from_json(j.at("not"), p.at("not")));
  } else if (j.contains("all") || j.contains("any")) {
    const bool all = j.contains("all");
    out.op = all ? Predicate::Op::kAll : Predicate::Op::kAny;
    const std::string key = all ? "all" : "any";
    const json& arr = array_field(j, key, p);
    for (std::size_t i = 0; i < arr.size(); ++i) out.args.push_back(predicate_from_json(arr[i], p.at(key).at(i)));
  } else {
    fail_at(p, "schema", "unknown predicate operator");
  }
  return out;
}

inline std::vector<std::string> id_list(const json& j, std::string_view key, const JsonPath& p) {
  const json& arr = array_field(j, key, p);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) fail_at(p.at(key).at(i), "schema", "expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

inline Constraint constraint_from_json(const json& j, const JsonPath& p) {
  const std::string kind = string_field(j, "kind", p);
  if (kind == "at_least_k")
    return AtLeastK{id_list(j, "choices", p), static_cast<int>(int_field(j, "k", p))};
  if (kind == "implied_by")
    return ImpliedBy{string_field(j, "target", p), predicate_from_json(field(j, "condition", p), p.at("condition"))};
  if (kind == "requires_count_ge")
    return RequiresCountGE{string_field(j, "target", p), id_list(j, "choices", p),
                           static_cast<int>(int_field(j, "k", p))};
  fail_at(p.at("kind"), "schema", "unknown constraint kind '" + kind + "'");
}

inline std::vector<SubAgentConfig> config_space_from_json(const json& j, const json& named, const JsonPath& p) {
  if (j.is_string()) {
    const std::string ref = j.get<std::string>();
    if (!named.is_object() || !named.contains(ref))
      fail_at(p, "unknown_config_space", "unknown config space '" + ref + "'");
    return config_space_from_json(named.at(ref), json(), JsonPath{"/config_spaces/" + ref});
  }
  std::vector<SubAgentConfig> out;
  if (j.is_object() && j.contains("configs")) {
    const json& arr = array_field(j, "configs", p);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto q = p.at("configs").at(i);
      out.push_back({string_field(arr[i], "model", q), int_field(arr[i], "budget", q)});
    }
  } else if (j.is_object()) {
    const json& models = array_field(j, "models", p);
    const json& budgets = array_field(j, "budgets", p);
    for (std::size_t m = 0; m < models.size(); ++m) {
      if (!models[m].is_string()) fail_at(p.at("models").at(m), "schema", "expected a string");
      for (std::size_t b = 0; b < budgets.size(); ++b) {
        if (!budgets[b].is_number_integer()) fail_at(p.at("budgets").at(b), "schema", "expected an integer");
        out.push_back({models[m].get<std::string>(), budgets[b].get<std::int64_t>()});
      }
    }
  } else {
    fail_at(p, "schema", "config space must be an object or a named reference");
  }
  for (const auto& c : out) check_config(c, p.str());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    fail_at(p, "duplicate_id", "duplicate (model, budget) in config space");
  if (out.empty()) fail_at(p, "schema", "config space is empty");
  return out;
}

inline void collect_choice_refs(const Node& n, std::vector<std::string>& out) {
  if (n.kind == Node::Kind::kOptional) out.push_back(n.choice);
  for (const auto& c : n.children) collect_choice_refs(c, out);
  for (const auto& s : n.stages) collect_choice_refs(s, out);
}

inline void collect_predicate_refs(const Predicate& p, std::vector<std::string>& out) {
  if (p.op == Predicate::Op::kChoice) out.push_back(p.choice);
  for (const auto& a : p.args) collect_predicate_refs(a, out);
}

inline json predicate_to_json(const Predicate& p) {
  switch (p.op) {
    case Predicate::Op::kChoice: return json{{"choice", p.choice}};
    case Predicate::Op::kNot: return json{{"not", predicate_to_json(p.args.front())}};
    case Predicate::Op::kAll:
    case Predicate::Op::kAny: {
      json arr = json::array();
      for (const auto& a : p.args) arr.push_back(predicate_to_json(a));
      return json{{p.op == Predicate::Op::kAll ? "all" : "any", arr}};
    }
  }
  return {};
}

}  // namespace detail

inline void validate(const WorkflowSpec& spec) {
  std::set<std::string> role_ids, choice_ids;
  for (const auto& r : spec.roles) {
    if (!is_id_token(r.id)) fail_input("bad_id", "invalid role id '" + r.id + "'");
    if (!role_ids.insert(r.id).second) fail_input("duplicate_id", "duplicate role id '" + r.id + "'");
  }
  for (const auto& c : spec.choices) {
    if (!is_id_token(c.id)) fail_input("bad_id", "invalid choice id '" + c.id + "'");
    if (!choice_ids.insert(c.id).second) fail_input("duplicate_id", "duplicate choice id '" + c.id + "'");
  }
  std::vector<std::string> refs;
  detail::collect_choice_refs(spec.graph, refs);
  for (const auto& c : spec.constraints) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, ImpliedBy>) {
            refs.push_back(v.target);
            detail::collect_predicate_refs(v.condition, refs);
          } else {
            if constexpr (std::is_same_v<T, RequiresCountGE>) refs.push_back(v.target);
            refs.insert(refs.end(), v.choices.begin(), v.choices.end());
          }
        },
        c);
  }
  for (const auto& id : refs)
    if (!choice_ids.count(id)) fail_input("unknown_choice", "unknown choice '" + id + "'");

  for (const auto& leaf : leaves(spec.graph))
    if (!role_ids.count(leaf)) fail_input("unknown_role", "unknown role '" + leaf + "' referenced in graph");

  // Leaf ids must be unique once every optional subtree is on and loops are unrolled.
  std::vector<std::string> unrolled = leaves(unroll_loops(spec.graph));
  std::sort(unrolled.begin(), unrolled.end());
  const auto dup = std::adjacent_find(unrolled.begin(), unrolled.end());
  if (dup != unrolled.end()) fail_input("duplicate_id", "role '" + *dup + "' appears more than once in the graph");
}

inline WorkflowSpec workflow_spec_from_json(const json& doc) {
  const detail::JsonPath root;
  WorkflowSpec spec;
  spec.name = detail::string_field(doc, "name", root);
  const json named = doc.contains("config_spaces") ? doc.at("config_spaces") : json::object();

  const json& roles = detail::array_field(doc, "roles", root);
  for (std::size_t i = 0; i < roles.size(); ++i) {
    const auto p = root.at("roles").at(i);
    spec.roles.push_back({detail::string_field(roles[i], "id", p),
                          detail::config_space_from_json(detail::field(roles[i], "config_space", p), named,
                                                         p.at("config_space"))});
  }
  if (doc.contains("choices")) {
    const json& choices = detail::array_field(doc, "choices", root);
    for (std::size_t i = 0; i < choices.size(); ++i) {
      const auto p = root.at("choices").at(i);
      ChoiceDecl c{detail::string_field(choices[i], "id", p), true};
      if (choices[i].contains("default")) {
        if (!choices[i].at("default").is_boolean()) detail::fail_at(p.at("default"), "schema", "expected a boolean");
        c.default_value = choices[i].at("default").get<bool>();
      }
      spec.choices.push_back(std::move(c));
    }
  }
  if (doc.contains("constraints")) {
    const json& cs = detail::array_field(doc, "constraints", root);
    for (std::size_t i = 0; i < cs.size(); ++i)
      spec.constraints.push_back(detail::constraint_from_json(cs[i], root.at("constraints").at(i)));
  }
  spec.graph = detail::node_from_json(detail::field(doc, "graph", root), root.at("graph"));
  validate(spec);
  return spec;
}

inline WorkflowSpec parse_workflow_spec(std::string_view document) {
  return workflow_spec_from_json(detail::parse_json_text(document, "workflow spec"));
}

inline json to_json(const Node& n) {
  using K = Node::Kind;
  json j = {{"kind", kind_name(n.kind)}};
  auto list = [](const std::vector<Node>& v) {
    json arr = json::array();
    for (const auto& c : v) arr.push_back(to_json(c));
    return arr;
  };
  switch (n.kind) {
    case K::kLeaf: j["role"] = n.role; break;
    case K::kSeq:
    case K::kOr:
    case K::kAnd: j["children"] = list(n.children); break;
    case K::kCond:
      j["primary"] = to_json(n.children[0]);
      j["fallback"] = to_json(n.children[1]);
      break;
    case K::kLoop:
      j["body"] = to_json(n.children[0]);
      j["repair_stages"] = list(n.stages);
      j["max_retries"] = n.max_retries;
      break;
    case K::kOptional:
      j["choice"] = n.choice;
      j["child"] = to_json(n.children[0]);
      break;
  }
  return j;
}

inline json to_json(const WorkflowSpec& spec) {
  json roles = json::array();
  for (const auto& r : spec.roles) {
    json configs = json::array();
    for (const auto& c : r.config_space) configs.push_back({{"model", c.model}, {"budget", c.budget}});
    roles.push_back({{"id", r.id}, {"config_space", {{"configs", configs}}}});
  }
  json choices = json::array();
  for (const auto& c : spec.choices) choices.push_back({{"id", c.id}, {"default", c.default_value}});
  json constraints = json::array();
  for (const auto& c : spec.constraints) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, AtLeastK>)
            constraints.push_back({{"kind", "at_least_k"}, {"choices", v.choices}, {"k", v.k}});
          else if constexpr (std::is_same_v<T, ImpliedBy>)
            constraints.push_back(
                {{"kind", "implied_by"}, {"target", v.target}, {"condition", detail::predicate_to_json(v.condition)}});
          else
            constraints.push_back(
                {{"kind", "requires_count_ge"}, {"target", v.target}, {"choices", v.choices}, {"k", v.k}});
        },
        c);
  }
  return {{"name", spec.name},
          {"roles", roles},
          {"choices", choices},
          {"constraints", constraints},
          {"graph", to_json(spec.graph)}};
}

}  // namespace wfc
