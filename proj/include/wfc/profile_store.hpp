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
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfc/error.hpp"
#include "wfc/types.hpp"
#include "wfc/workflow_ir.hpp"

namespace wfc {

struct Profile {
  std::string role;
  SubAgentConfig config;
  double accuracy = 0.0;
  double latency = 0.0;  // seconds
  std::int64_t sample_count = 1;

  bool operator==(const Profile&) const = default;
};

struct ProfileKey {
  std::string role;
  SubAgentConfig config;
  auto operator<=>(const ProfileKey&) const = default;
  bool operator==(const ProfileKey&) const = default;
};

inline std::string to_string(const ProfileKey& k) { return "(" + k.role + ", " + to_string(k.config) + ")"; }

struct ProfileMetadata {
  std::string source;
  std::string created;
  int format_version = kFormatVersion;
  bool operator==(const ProfileMetadata&) const = default;
};

class ProfileTable {
 public:
  ProfileMetadata metadata;

  // Validates and inserts; rejects duplicates and out-of-range values.
  void add(Profile p) {
    const std::string key = to_string(ProfileKey{p.role, p.config});
    if (!is_id_token(base_role(p.role)) || (p.role.find('#') != std::string::npos && !valid_suffixed(p.role)))
      fail_input("bad_id", "invalid role id in profile " + key);
    check_config(p.config, "profile " + key);
    if (!std::isfinite(p.accuracy) || p.accuracy < 0.0 || p.accuracy > 1.0)
      fail_input("range", "accuracy " + num(p.accuracy) + " outside [0,1] for " + key);
    if (!std::isfinite(p.latency) || p.latency < 0.0)
      fail_input("range", "latency " + num(p.latency) + " must be a nonnegative finite number for " + key);
    if (p.sample_count < 1) fail_input("range", "sample_count must be >= 1 for " + key);
    ProfileKey k{p.role, p.config};
    if (!entries_.emplace(std::move(k), std::move(p)).second) fail_input("duplicate_key", "duplicate profile " + key);
  }

  // Exact lookup, falling back to the base role for depth-suffixed ids.
  const Profile* find(std::string_view role, const SubAgentConfig& c) const {
    auto it = entries_.find(ProfileKey{std::string(role), c});
    if (it != entries_.end()) return &it->second;
    const auto base = base_role(role);
    if (base.size() == role.size()) return nullptr;
    it = entries_.find(ProfileKey{std::string(base), c});
    return it == entries_.end() ? nullptr : &it->second;
  }

  const Profile& at(std::string_view role, const SubAgentConfig& c) const {
    const Profile* p = find(role, c);
    if (p == nullptr)
      fail_input("missing_profile", "missing profile for " + to_string(ProfileKey{std::string(role), c}));
    return *p;
  }

  // Profiles of `role`, using the base role's entries when the suffixed id
  // has none of its own. Ordered by config.
  std::vector<Profile> profiles_for(std::string_view role) const {
    auto collect = [&](std::string_view r) {
      std::vector<Profile> out;
      for (auto it = entries_.lower_bound(ProfileKey{std::string(r), SubAgentConfig{"", 0}});
           it != entries_.end() && it->first.role == r; ++it)
        out.push_back(it->second);
      return out;
    };
    auto out = collect(role);
    if (out.empty() && base_role(role).size() != role.size()) {
      out = collect(base_role(role));
      for (auto& p : out) p.role = std::string(role);
    }
    return out;
  }

  std::vector<std::string> roles() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_)
      if (out.empty() || out.back() != k.role) out.push_back(k.role);
    return out;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<ProfileKey, Profile>& entries() const { return entries_; }

  bool operator==(const ProfileTable&) const = default;

 private:
  static bool valid_suffixed(std::string_view role) {
    const auto pos = role.find('#');
    const auto digits = role.substr(pos + 1);
    return !digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; });
  }
  static std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }

  std::map<ProfileKey, Profile> entries_;
};

// ---------------------------------------------------------------------------
// Ingestion

inline ProfileTable profiles_from_json(const json& doc) {
  using detail::JsonPath;
  const JsonPath root;
  ProfileTable t;
  if (doc.contains("format_version")) {
    const auto v = detail::int_field(doc, "format_version", root);
    if (v != kFormatVersion)
      fail_input("version", "unsupported profile format_version " + std::to_string(v));
  }
  if (doc.contains("source")) t.metadata.source = detail::string_field(doc, "source", root);
  if (doc.contains("created")) t.metadata.created = detail::string_field(doc, "created", root);
  const json& entries = detail::array_field(doc, "entries", root);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto p = root.at("entries").at(i);
    const json& e = entries[i];
    auto number = [&](std::string_view key) {
      const json& v = detail::field(e, key, p);
      if (!v.is_number()) detail::fail_at(p.at(key), "schema", "expected a number");
      return v.get<double>();
    };
    Profile prof;
    prof.role = detail::string_field(e, "role", p);
    prof.config = {detail::string_field(e, "model", p), detail::int_field(e, "budget", p)};
    prof.accuracy = number("accuracy");
    prof.latency = number("latency_s");
    prof.sample_count = e.contains("sample_count") ? detail::int_field(e, "sample_count", p) : 1;
    t.add(std::move(prof));
  }
  return t;
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail_input("syntax", where + ": expected a number, got '" + s + "'");
  }
}

inline std::int64_t parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail_input("syntax", where + ": expected an integer, got '" + s + "'");
  }
}

}  // namespace detail

// CSV with a header row naming role, model, budget, accuracy, latency_s and
// optionally sample_count, in any order. Lines starting with '#' are skipped.
inline ProfileTable load_profiles_csv(std::string_view text) {
  ProfileTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::map<std::string, std::size_t> col;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = detail::split_csv_line(line);
    if (col.empty()) {
      for (std::size_t i = 0; i < fields.size(); ++i) col[fields[i]] = i;
      for (const char* need : {"role", "model", "budget", "accuracy", "latency_s"})
        if (!col.count(need)) fail_input("schema", "profile CSV header is missing column '" + std::string(need) + "'");
      continue;
    }
    const std::string where = "profile CSV line " + std::to_string(lineno);
    if (fields.size() != col.size())
      fail_input("syntax", where + ": expected " + std::to_string(col.size()) + " fields, got " +
                               std::to_string(fields.size()));
    Profile p;
    p.role = fields[col["role"]];
    p.config = {fields[col["model"]], detail::parse_int(fields[col["budget"]], where)};
    p.accuracy = detail::parse_double(fields[col["accuracy"]], where);
    p.latency = detail::parse_double(fields[col["latency_s"]], where);
    p.sample_count = col.count("sample_count") ? detail::parse_int(fields[col["sample_count"]], where) : 1;
    t.add(std::move(p));
  }
  return t;
}

inline ProfileTable load_profiles(std::string_view document) {
  return profiles_from_json(detail::parse_json_text(document, "profile table"));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_input("io", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_input("io", "cannot write '" + path + "'");
  out << content;
  if (!out) fail_input("io", "write to '" + path + "' failed");
}

inline ProfileTable load_profiles_file(const std::string& path) {
  const std::string text = read_file(path);
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  ProfileTable t = csv ? load_profiles_csv(text) : load_profiles(text);
  if (t.metadata.source.empty()) t.metadata.source = path;
  return t;
}

inline json to_json(const ProfileTable& t) {
  json entries = json::array();
  for (const auto& [k, p] : t.entries())
    entries.push_back({{"role", p.role},
                       {"model", p.config.model},
                       {"budget", p.config.budget},
                       {"accuracy", p.accuracy},
                       {"latency_s", p.latency},
                       {"sample_count", p.sample_count}});
  return {{"format_version", t.metadata.format_version},
          {"source", t.metadata.source},
          {"created", t.metadata.created},
          {"entries", entries}};
}

inline std::string save_profiles(const ProfileTable& t) { return to_json(t).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Dominance pruning

struct PrunedOptionSet {
  std::string role;
  std::vector<Profile> kept;  // latency ascending, accuracy strictly ascending
  std::size_t dropped_count = 0;
};

// Latency-ordered sweep. A profile survives only if its accuracy exceeds the
// best accuracy kept so far by more than epsilon; with epsilon = 0 this is the
// exact Pareto staircase. Sort order (latency asc, accuracy desc, config asc)
// makes the lexicographically smallest config win exact ties.
inline PrunedOptionSet prune_options(std::string role, std::vector<Profile> options, double epsilon = 0.0) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail_input("range", "epsilon must be a finite value >= 0");
  std::sort(options.begin(), options.end(), [](const Profile& a, const Profile& b) {
    if (a.latency != b.latency) return a.latency < b.latency;
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.config < b.config;
  });
  PrunedOptionSet out;
  out.role = std::move(role);
  for (auto& p : options) {
    if (out.kept.empty() || p.accuracy > out.kept.back().accuracy + epsilon) {
      out.kept.push_back(std::move(p));
    } else {
      ++out.dropped_count;
    }
  }
  return out;
}

inline PrunedOptionSet prune_dominated(const ProfileTable& table, std::string_view role, double epsilon = 0.0) {
  auto options = table.profiles_for(role);
  if (options.empty()) fail_input("unknown_role", "no profiles for role '" + std::string(role) + "'");
  return prune_options(std::string(role), std::move(options), epsilon);
}

// Profiles for exactly the configs a role declares; every hole is an error.
inline std::vector<Profile> declared_options(const WorkflowSpec& spec, const ProfileTable& table,
                                             std::string_view role) {
  std::vector<Profile> out;
  for (const auto& c : spec.config_space(role)) {
    Profile p = table.at(role, c);
    p.role = std::string(role);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace wfc
