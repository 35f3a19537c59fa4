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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "wfc/error.hpp"
#include "wfc/frontier.hpp"
#include "wfc/hash.hpp"
#include "wfc/profile_store.hpp"
#include "wfc/proxy.hpp"
#include "wfc/types.hpp"
#include "wfc/workflow_ir.hpp"

namespace wfc {

using BigCount = boost::multiprecision::cpp_int;

struct WorkflowConfiguration {
  StructuralAssignment structural;
  RoleAssignment assignment;
  std::string id;

  bool operator==(const WorkflowConfiguration&) const = default;
};

// Canonical id: "choice=0|1,..." then '|' then "role=model@budget;...", both
// parts in key order. Injective because ids and model names cannot contain
// the separators.
inline std::string make_config_id(const StructuralAssignment& s, const RoleAssignment& a) {
  std::string out;
  for (const auto& [c, on] : s) {
    if (!out.empty()) out += ',';
    out += c;
    out += on ? "=1" : "=0";
  }
  out += '|';
  bool first = true;
  for (const auto& [r, q] : a) {
    if (!first) out += ';';
    first = false;
    out += r;
    out += '=';
    out += to_string(q);
  }
  return out;
}

inline WorkflowConfiguration make_configuration(StructuralAssignment s, RoleAssignment a) {
  std::string id = make_config_id(s, a);
  return {std::move(s), std::move(a), std::move(id)};
}

struct CompiledEntry {
  WorkflowConfiguration config;
  Estimate estimate;
  bool operator==(const CompiledEntry&) const = default;
};

struct CompiledSetMetadata {
  std::string spec_name;
  std::string profile_source;
  ExecutionModel exec = ExecutionModel::kSequentialEdge;
  std::string proxy_version{kProxyVersion};
  double epsilon = 0.0;
  std::string full_space_size;    // decimal, arbitrary precision
  std::string pruned_space_size;  // decimal, arbitrary precision
  json workflow;                  // the workflow spec the set was compiled from
  bool operator==(const CompiledSetMetadata&) const = default;
};

struct CompiledSet {
  std::vector<CompiledEntry> entries;  // latency ascending, accuracy strictly ascending
  CompiledSetMetadata metadata;
  bool operator==(const CompiledSet&) const = default;

  const CompiledEntry* find(std::string_view id) const {
    for (const auto& e : entries)
      if (e.config.id == id) return &e;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Counting

namespace detail {

template <class Map>
auto lookup_role(const Map& m, const std::string& role) -> const typename Map::mapped_type& {
  auto it = m.find(role);
  if (it == m.end()) it = m.find(std::string(base_role(role)));
  if (it == m.end()) fail_input("unknown_role", "role '" + role + "' missing from option sets");
  return it->second;
}

}  // namespace detail

// Sum over structural variants of the product of the active roles' option
// counts.
inline BigCount count_configurations(const WorkflowSpec& spec, const std::map<std::string, std::size_t>& counts) {
  BigCount total = 0;
  for (const auto& v : enumerate_structures(spec).variants) {
    BigCount prod = 1;
    for (const auto& r : v.active_roles) {
      const std::size_t n = detail::lookup_role(counts, r);
      if (n < 1) fail_input("range", "role '" + r + "' has no options");
      prod *= n;
    }
    total += prod;
  }
  return total;
}

inline std::map<std::string, std::size_t> declared_counts(const WorkflowSpec& spec) {
  std::map<std::string, std::size_t> out;
  for (const auto& r : spec.roles) out[r.id] = r.config_space.size();
  return out;
}

// Materializes every configuration; only for small (restricted) spaces.
inline std::vector<WorkflowConfiguration> enumerate_configurations(
    const WorkflowSpec& spec, const std::map<std::string, std::vector<SubAgentConfig>>& options,
    std::size_t cap = 1'000'000) {
  std::vector<WorkflowConfiguration> out;
  for (const auto& v : enumerate_structures(spec).variants) {
    std::vector<const std::vector<SubAgentConfig>*> opts;
    for (const auto& r : v.active_roles) {
      opts.push_back(&detail::lookup_role(options, r));
      if (opts.back()->empty()) fail_input("range", "role '" + r + "' has no options");
    }
    std::vector<std::size_t> idx(opts.size(), 0);
    while (true) {
      if (out.size() >= cap)
        fail_infeasible("space_too_large", "configuration space exceeds cap of " + std::to_string(cap));
      RoleAssignment a;
      for (std::size_t i = 0; i < idx.size(); ++i) a[v.active_roles[i]] = (*opts[i])[idx[i]];
      out.push_back(make_configuration(v.choices, std::move(a)));
      bool wrapped = true;
      for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < opts[k]->size()) {
          wrapped = false;
          break;
        }
        idx[k] = 0;
      }
      if (wrapped) break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Option pruning across a spec

// Per active role (depth-suffixed ids included): the declared options and
// their pruned staircase.
struct RoleOptions {
  std::vector<Profile> declared;
  PrunedOptionSet pruned;
};

inline std::map<std::string, RoleOptions> prune_spec_options(const WorkflowSpec& spec, const ProfileTable& table,
                                                             double epsilon,
                                                             const StructureEnumeration& structures) {
  std::map<std::string, RoleOptions> out;
  for (const auto& v : structures.variants)
    for (const auto& r : v.active_roles) {
      if (out.count(r)) continue;
      auto declared = declared_options(spec, table, r);
      auto pruned = prune_options(r, declared, epsilon);
      out.emplace(r, RoleOptions{std::move(declared), std::move(pruned)});
    }
  return out;
}

struct RoleReduction {
  std::string role;
  std::size_t before = 0;
  std::size_t after = 0;
};

struct ReductionStats {
  std::vector<RoleReduction> roles;
  BigCount full_space = 0;
  BigCount pruned_space = 0;
};

inline ReductionStats reduction_report(const WorkflowSpec& spec, const std::map<std::string, std::size_t>& before,
                                       const std::map<std::string, PrunedOptionSet>& after) {
  ReductionStats out;
  std::map<std::string, std::size_t> after_counts;
  for (const auto& [role, n] : before) {
    const auto& p = detail::lookup_role(after, role);
    out.roles.push_back({role, n, p.kept.size()});
    after_counts[role] = p.kept.size();
  }
  for (const auto& [role, p] : after)
    if (!after_counts.count(role)) after_counts[role] = p.kept.size();
  out.full_space = count_configurations(spec, before);
  out.pruned_space = count_configurations(spec, after_counts);
  return out;
}

inline ReductionStats reduction_report(const WorkflowSpec& spec, const ProfileTable& table, double epsilon = 0.0) {
  const auto structures = enumerate_structures(spec);
  const auto opts = prune_spec_options(spec, table, epsilon, structures);
  std::map<std::string, std::size_t> before;
  std::map<std::string, PrunedOptionSet> after;
  for (const auto& [r, o] : opts) {
    before[r] = o.declared.size();
    after[r] = o.pruned;
  }
  return reduction_report(spec, before, after);
}

// ---------------------------------------------------------------------------
// Exploration

namespace detail {

// One enumerated candidate: its estimate and its mixed-radix rank inside the
// cross product of its structural variant.
struct Candidate {
  double accuracy;
  double latency;
  std::uint32_t variant;
  std::uint64_t rank;
};

struct VariantPlan {
  const StructuralVariant* variant = nullptr;
  std::vector<const std::vector<Profile>*> options;  // per active role
  FlatGraph graph;
  std::uint64_t size = 1;

  RoleAssignment decode(std::uint64_t rank) const {
    RoleAssignment a;
    for (std::size_t i = options.size(); i-- > 0;) {
      const auto& o = *options[i];
      a[variant->active_roles[i]] = o[rank % o.size()].config;
      rank /= o.size();
    }
    return a;
  }

  std::string id(std::uint64_t rank) const { return make_config_id(variant->choices, decode(rank)); }
};

class FrontierAccumulator {
 public:
  explicit FrontierAccumulator(const std::vector<VariantPlan>& plans) : plans_(&plans) {}

  void push(const Candidate& c) {
    buf_.push_back(c);
    if (buf_.size() >= limit_) flush();
  }

  void merge(std::vector<Candidate> other) {
    buf_.insert(buf_.end(), other.begin(), other.end());
    flush();
  }

  std::vector<Candidate> take() {
    flush();
    return std::move(buf_);
  }

 private:
  void flush() {
    keep_frontier(
        buf_, [](const Candidate& c) { return c.accuracy; }, [](const Candidate& c) { return c.latency; },
        [this](const Candidate& a, const Candidate& b) {
          return (*plans_)[a.variant].id(a.rank) < (*plans_)[b.variant].id(b.rank);
        });
    limit_ = std::max<std::size_t>(kChunk, 2 * buf_.size());
  }

  static constexpr std::size_t kChunk = 1 << 16;
  const std::vector<VariantPlan>* plans_;
  std::vector<Candidate> buf_;
  std::size_t limit_ = kChunk;
};

inline void explore_variant(const std::vector<VariantPlan>& plans, std::uint32_t vi, FrontierAccumulator& acc) {
  const VariantPlan& plan = plans[vi];
  const std::size_t n = plan.options.size();
  std::vector<double> a(n), l(n);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = (*plan.options[i])[0].accuracy;
    l[i] = (*plan.options[i])[0].latency;
  }
  for (std::uint64_t rank = 0; rank < plan.size; ++rank) {
    const Estimate e = plan.graph(a, l);
    acc.push({e.accuracy, e.latency, vi, rank});
    // Odometer, last role fastest (matches decode()).
    for (std::size_t k = n; k-- > 0;) {
      const auto& o = *plan.options[k];
      if (++idx[k] < o.size()) {
        a[k] = o[idx[k]].accuracy;
        l[k] = o[idx[k]].latency;
        break;
      }
      idx[k] = 0;
      a[k] = o[0].accuracy;
      l[k] = o[0].latency;
    }
  }
}

}  // namespace detail

inline constexpr std::uint64_t kMaxVariantSpace = 1'000'000'000'000ULL;

struct ExploreOptions {
  double epsilon = 0.0;
  unsigned workers = 1;
  // false: enumerate every declared option (the unpruned reference space).
  bool prune = true;
};

// Enumerates the (pruned) configuration space, evaluates the proxy on every
// candidate and returns the non-dominated set. The result is independent of
// `workers`: each worker filters its own variants and a single merge step
// re-filters the union.
inline CompiledSet explore(const WorkflowSpec& spec, const ProfileTable& table, ExecutionModel exec,
                           const ExploreOptions& opt = {}) {
  const auto structures = enumerate_structures(spec);
  if (structures.variants.empty()) fail_infeasible("empty_space", "workflow constraints admit no structure");
  const auto role_opts = prune_spec_options(spec, table, opt.epsilon, structures);

  std::vector<detail::VariantPlan> plans;
  plans.reserve(structures.variants.size());
  for (const auto& v : structures.variants) {
    detail::VariantPlan plan;
    plan.variant = &v;
    for (const auto& r : v.active_roles) {
      const auto& ro = role_opts.at(r);
      plan.options.push_back(opt.prune ? &ro.pruned.kept : &ro.declared);
      plan.size *= plan.options.back()->size();
      if (plan.size > kMaxVariantSpace)
        fail_infeasible("space_too_large", "a structural variant of '" + spec.name + "' exceeds " +
                                               std::to_string(kMaxVariantSpace) + " candidates");
    }
    const auto& roles = v.active_roles;
    plan.graph = FlatGraph(
        v.graph,
        [&](const std::string& r) {
          return static_cast<std::size_t>(std::lower_bound(roles.begin(), roles.end(), r) - roles.begin());
        },
        exec);
    plans.push_back(std::move(plan));
  }

  const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(plans.size())));
  std::vector<std::vector<detail::Candidate>> partial(workers);
  auto run = [&](unsigned w) {
    detail::FrontierAccumulator acc(plans);
    for (std::size_t vi = w; vi < plans.size(); vi += workers) detail::explore_variant(plans, static_cast<std::uint32_t>(vi), acc);
    partial[w] = acc.take();
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  detail::FrontierAccumulator merged(plans);
  for (auto& p : partial) merged.merge(std::move(p));
  auto frontier = merged.take();
  // Epsilon thinning after the exact merge: greedy thinning of the exact
  // frontier equals greedy thinning of the whole space, for any partitioning.
  if (opt.epsilon > 0.0) {
    std::vector<detail::Candidate> thinned;
    for (const auto& c : frontier)
      if (thinned.empty() || c.accuracy > thinned.back().accuracy + opt.epsilon) thinned.push_back(c);
    frontier = std::move(thinned);
  }

  CompiledSet out;
  for (const auto& c : frontier) {
    const auto& plan = plans[c.variant];
    out.entries.push_back({make_configuration(plan.variant->choices, plan.decode(c.rank)), {c.accuracy, c.latency}});
  }

  std::map<std::string, std::size_t> full, pruned;
  for (const auto& [r, o] : role_opts) {
    full[r] = o.declared.size();
    pruned[r] = opt.prune ? o.pruned.kept.size() : o.declared.size();
  }
  out.metadata.spec_name = spec.name;
  out.metadata.profile_source = table.metadata.source;
  out.metadata.exec = exec;
  out.metadata.epsilon = opt.epsilon;
  out.metadata.full_space_size = count_configurations(spec, full).str();
  out.metadata.pruned_space_size = count_configurations(spec, pruned).str();
  out.metadata.workflow = to_json(spec);
  return out;
}

// ---------------------------------------------------------------------------
// Artifact I/O

namespace detail {

inline constexpr const char* kDigestKey = "content_sha256";

// Digest of the serialized artifact with the digest field itself removed.
inline std::string artifact_digest(json doc) {
  doc.erase(kDigestKey);
  return sha256_hex(doc.dump());
}

}  // namespace detail

inline json to_json(const CompiledSet& set) {
  json entries = json::array();
  for (const auto& e : set.entries) {
    json assignment = json::object();
    for (const auto& [r, q] : e.config.assignment) assignment[r] = {{"model", q.model}, {"budget", q.budget}};
    entries.push_back({{"id", e.config.id},
                       {"structural", e.config.structural},
                       {"assignment", assignment},
                       {"est_accuracy", e.estimate.accuracy},
                       {"est_latency_s", e.estimate.latency}});
  }
  const auto& m = set.metadata;
  json doc = {{"format_version", kFormatVersion},
          {"tool_version", kToolVersion},
          {"metadata",
           {{"spec_name", m.spec_name},
            {"profile_source", m.profile_source},
            {"execution_model", to_string(m.exec)},
            {"proxy_version", m.proxy_version},
            {"epsilon", m.epsilon},
            {"full_space_size", m.full_space_size},
            {"pruned_space_size", m.pruned_space_size},
            {"workflow", m.workflow}}},
          {"entries", entries}};
  doc[detail::kDigestKey] = detail::artifact_digest(doc);
  return doc;
}

inline std::string save_compiled_set(const CompiledSet& set) { return to_json(set).dump(2) + "\n"; }

inline void save_compiled_set(const CompiledSet& set, const std::string& path) {
  write_file(path, save_compiled_set(set));
}

// Checks the staircase invariant and that every id is the canonical
// encoding of its structure and assignment.
inline void validate_compiled_set(const CompiledSet& set) {
  std::optional<WorkflowSpec> spec;
  if (!set.metadata.workflow.is_null()) spec = workflow_spec_from_json(set.metadata.workflow);
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    const auto& e = set.entries[i];
    const std::string where = "entry " + std::to_string(i) + " ('" + e.config.id + "')";
    if (e.config.id != make_config_id(e.config.structural, e.config.assignment))
      fail_input("tampered", where + ": id does not match its structure and assignment");
    if (!std::isfinite(e.estimate.accuracy) || e.estimate.accuracy < 0.0 || e.estimate.accuracy > 1.0 ||
        !std::isfinite(e.estimate.latency) || e.estimate.latency < 0.0)
      fail_input("tampered", where + ": estimate out of range");
    if (i > 0) {
      const auto& prev = set.entries[i - 1].estimate;
      if (!(e.estimate.latency > prev.latency && e.estimate.accuracy > prev.accuracy))
        fail_input("tampered", where + ": entries are not a strictly non-dominated staircase");
    }
    if (spec) {
      if (!spec->satisfies_constraints(e.config.structural) || e.config.structural.size() != spec->choices.size())
        fail_input("tampered", where + ": structure violates the workflow constraints");
      const auto g = instantiate(*spec, e.config.structural);
      if (!g) fail_input("tampered", where + ": structure leaves no executable sub-agent");
      auto active = leaves(*g);
      std::sort(active.begin(), active.end());
      std::vector<std::string> assigned;
      for (const auto& [r, q] : e.config.assignment) assigned.push_back(r);
      if (active != assigned) fail_input("tampered", where + ": assignment does not match the active roles");
    }
  }
}

inline CompiledSet compiled_set_from_json(const json& doc) {
  using detail::JsonPath;
  const JsonPath root;
  const auto version = detail::int_field(doc, "format_version", root);
  if (version != kFormatVersion)
    fail_input("version", "artifact format_version " + std::to_string(version) + " is not supported (expected " +
                              std::to_string(kFormatVersion) + ")");
  const std::string digest = detail::string_field(doc, detail::kDigestKey, root);
  if (digest != detail::artifact_digest(doc))
    fail_input("tampered", "artifact content does not match its content_sha256 digest");
  CompiledSet set;
  const json& m = detail::field(doc, "metadata", root);
  const auto mp = root.at("metadata");
  set.metadata.spec_name = detail::string_field(m, "spec_name", mp);
  set.metadata.profile_source = detail::string_field(m, "profile_source", mp);
  set.metadata.exec = parse_execution_model(detail::string_field(m, "execution_model", mp));
  set.metadata.proxy_version = detail::string_field(m, "proxy_version", mp);
  set.metadata.epsilon = detail::field(m, "epsilon", mp).get<double>();
  set.metadata.full_space_size = detail::string_field(m, "full_space_size", mp);
  set.metadata.pruned_space_size = detail::string_field(m, "pruned_space_size", mp);
  if (m.contains("workflow")) set.metadata.workflow = m.at("workflow");

  const json& entries = detail::array_field(doc, "entries", root);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto p = root.at("entries").at(i);
    const json& e = entries[i];
    CompiledEntry ce;
    const json& s = detail::field(e, "structural", p);
    if (!s.is_object()) detail::fail_at(p.at("structural"), "schema", "expected an object");
    for (const auto& [k, v] : s.items()) {
      if (!v.is_boolean()) detail::fail_at(p.at("structural").at(k), "schema", "expected a boolean");
      ce.config.structural[k] = v.get<bool>();
    }
    const json& a = detail::field(e, "assignment", p);
    if (!a.is_object()) detail::fail_at(p.at("assignment"), "schema", "expected an object");
    for (const auto& [role, q] : a.items()) {
      const auto qp = p.at("assignment").at(role);
      ce.config.assignment[role] = {detail::string_field(q, "model", qp), detail::int_field(q, "budget", qp)};
    }
    ce.config.id = detail::string_field(e, "id", p);
    ce.estimate.accuracy = detail::field(e, "est_accuracy", p).get<double>();
    ce.estimate.latency = detail::field(e, "est_latency_s", p).get<double>();
    set.entries.push_back(std::move(ce));
  }
  validate_compiled_set(set);
  return set;
}

inline CompiledSet load_compiled_set(std::string_view text) {
  return compiled_set_from_json(detail::parse_json_text(text, "compiled artifact"));
}

inline CompiledSet load_compiled_set_file(const std::string& path) { return load_compiled_set(read_file(path)); }

// Non-empty when the artifact was compiled for a different execution model
// than the one it is being deployed under.
inline std::optional<std::string> execution_model_warning(const CompiledSet& set, ExecutionModel deploy) {
  if (set.metadata.exec == deploy) return std::nullopt;
  return "artifact was compiled for execution model '" + std::string(to_string(set.metadata.exec)) +
         "' but is used under '" + std::string(to_string(deploy)) + "'; latency estimates may not transfer";
}

// The workflow spec embedded in an artifact.
inline WorkflowSpec embedded_spec(const CompiledSet& set) {
  if (set.metadata.workflow.is_null()) fail_input("schema", "artifact carries no workflow spec");
  return workflow_spec_from_json(set.metadata.workflow);
}

}  // namespace wfc
