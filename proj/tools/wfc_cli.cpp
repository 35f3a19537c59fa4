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

// wfc: compile workflow design spaces into accuracy/latency frontiers and
// consume the resulting artifacts.
//
// Exit codes: 0 success, 2 input or validation error, 3 infeasible request,
// 4 internal invariant violation.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "wfc/manifest.hpp"
#include "wfc/wfc.hpp"

namespace {

using namespace wfc;

// ---------------------------------------------------------------------------
// Output helpers

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : ""; }

std::string csv_preamble() {
  return "# format_version=" + std::to_string(kFormatVersion) + " tool_version=" + std::string(kToolVersion) + "\n";
}

// Ids contain ',' so every id cell is quoted.
std::string quoted(const std::string& s) { return "\"" + s + "\""; }

class Run {
 public:
  explicit Run(std::string command) : start_(std::chrono::steady_clock::now()) { manifest_.command = std::move(command); }

  void input(const std::string& path) {
    if (!path.empty()) manifest_.add_input(path);
  }
  void seed(const std::string& name, std::uint64_t v) { manifest_.seeds[name] = v; }
  void setting(const std::string& k, const std::string& v) { manifest_.settings[k] = v; }

  // Writes `content` to `path`, or to stdout when `path` is empty. Files get
  // a manifest next to them.
  void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
      std::cout << content;
      return;
    }
    write_file(path, content);
    manifest_.outputs.push_back(path);
    manifest_.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_file(path + ".manifest.json", to_json(manifest_).dump(2) + "\n");
  }

 private:
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

void warn(const std::string& code, const std::string& message) {
  std::cerr << json{{"level", "warning"}, {"code", code}, {"message", message}}.dump() << "\n"
            << "wfc: warning: " << message << "\n";
}

// ---------------------------------------------------------------------------
// Shared loading

CompiledSet load_artifact(const std::string& path) { return load_compiled_set_file(path); }

TruthScenario load_scenario_file(const std::string& path, std::uint64_t seed) {
  TruthScenario s = load_scenario(read_file(path));
  s.seed = seed;  // the flag is authoritative
  return s;
}

// Largest estimated latency in the set unless given explicitly.
UtilityContext resolve_lmax(const CompiledSet& set, std::optional<double> lmax, Run& run, double floor = 0.0) {
  double v = floor;
  std::string source = "explicit";
  if (lmax) {
    v = *lmax;
  } else {
    for (const auto& e : set.entries) v = std::max(v, e.estimate.latency);
    source = "max comparand latency";
  }
  run.setting("l_max", num(v));
  run.setting("l_max_source", source);
  return UtilityContext(v);
}

void check_exec(const CompiledSet& set, const std::string& exec_flag) {
  if (exec_flag.empty()) return;
  if (auto w = execution_model_warning(set, parse_execution_model(exec_flag))) warn("exec_mismatch", *w);
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail_input("schema", "not a number: '" + item + "'");
    }
  }
  return out;
}

// Reads the CSV written by `simulate`.
std::map<std::string, MeasuredPoint> load_measurements(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::string> header;
  std::map<std::string, MeasuredPoint> out;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cur;
    bool q = false;
    for (char c : l) {
      if (c == '"') q = !q;
      else if (c == ',' && !q) {
        cells.push_back(cur);
        cur.clear();
      } else cur += c;
    }
    cells.push_back(cur);
    return cells;
  };
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (header.empty()) {
      header = cells;
      for (const char* need : {"config_id", "accuracy", "latency_s"})
        if (std::find(header.begin(), header.end(), need) == header.end())
          fail_input("schema", path + ": missing column '" + need + "'");
      continue;
    }
    if (cells.size() != header.size()) fail_input("schema", path + ":" + std::to_string(lineno) + ": wrong column count");
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < cells.size(); ++i) row[header[i]] = cells[i];
    MeasuredPoint m;
    m.config_id = row["config_id"];
    try {
      m.accuracy = std::stod(row["accuracy"]);
      m.latency = std::stod(row["latency_s"]);
      if (row.count("n_samples")) m.n_samples = std::stoull(row["n_samples"]);
    } catch (const std::exception&) {
      fail_input("schema", path + ":" + std::to_string(lineno) + ": malformed number");
    }
    if (!out.emplace(m.config_id, m).second)
      fail_input("duplicate_key", path + ":" + std::to_string(lineno) + ": duplicate config id");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

struct CompileArgs {
  std::string spec, profiles, exec = "sequential-edge", out;
  double epsilon = 0.0;
  unsigned workers = 1;
  bool no_prune = false;
};

int cmd_compile(const CompileArgs& a) {
  Run run("compile");
  run.input(a.spec);
  run.input(a.profiles);
  const auto spec = parse_workflow_spec(read_file(a.spec));
  const auto table = load_profiles_file(a.profiles);
  const auto exec = parse_execution_model(a.exec);
  run.setting("exec", a.exec);
  run.setting("epsilon", num(a.epsilon));
  run.setting("workers", std::to_string(a.workers));
  run.setting("prune", a.no_prune ? "false" : "true");

  const auto stats = reduction_report(spec, table, a.epsilon);
  ExploreOptions opt;
  opt.epsilon = a.epsilon;
  opt.workers = a.workers;
  opt.prune = !a.no_prune;
  const auto set = explore(spec, table, exec, opt);
  run.emit(a.out, save_compiled_set(set));

  std::cout << "workflow " << spec.name << ": full space " << stats.full_space.str() << ", pruned space "
            << stats.pruned_space.str() << ", frontier " << set.entries.size() << " entries\n";
  for (const auto& r : stats.roles) std::cout << "  " << r.role << ": " << r.before << " -> " << r.after << "\n";
  return 0;
}

struct CountArgs {
  std::string spec, profiles;
  double epsilon = 0.0;
};

int cmd_count(const CountArgs& a) {
  const auto spec = parse_workflow_spec(read_file(a.spec));
  const auto structures = enumerate_structures(spec);
  json out = {{"workflow", spec.name},
              {"structural_variants", structures.variants.size()},
              {"full_space", count_configurations(spec, declared_counts(spec)).str()}};
  if (!a.profiles.empty()) {
    const auto stats = reduction_report(spec, load_profiles_file(a.profiles), a.epsilon);
    out["pruned_space"] = stats.pruned_space.str();
    for (const auto& r : stats.roles) out["roles"][r.role] = {{"declared", r.before}, {"kept", r.after}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct SelectArgs {
  std::string artifact, exec, out;
  std::optional<double> budget, alpha, lmax;
};

json entry_json(const CompiledEntry& e) {
  return {{"id", e.config.id}, {"est_accuracy", e.estimate.accuracy}, {"est_latency_s", e.estimate.latency}};
}

int cmd_select(const SelectArgs& a) {
  Run run("select");
  run.input(a.artifact);
  const auto set = load_artifact(a.artifact);
  check_exec(set, a.exec);
  json out;
  if (a.budget) {
    run.setting("budget", num(*a.budget));
    out = entry_json(select_latency_constrained(set, *a.budget));
    out["mode"] = "latency-constrained";
  } else {
    const Preference pref(*a.alpha);
    const auto ctx = resolve_lmax(set, a.lmax, run);
    run.setting("alpha", num(*a.alpha));
    const auto& e = select_by_preference(set, pref, ctx);
    out = entry_json(e);
    out["mode"] = "preference";
    out["l_max"] = ctx.l_max();
    out["proxy_utility"] = expected_utility(e.estimate.accuracy, e.estimate.latency, pref, ctx);
  }
  run.emit(a.out, out.dump(2) + "\n");
  return 0;
}

struct SweepArgs {
  std::string artifact, exec, out, scenario, alphas;
  std::optional<double> lmax;
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 20000;
};

int cmd_sweep(const SweepArgs& a) {
  Run run("sweep");
  run.input(a.artifact);
  const auto set = load_artifact(a.artifact);
  check_exec(set, a.exec);
  const auto ctx = resolve_lmax(set, a.lmax, run);
  const auto grid = a.alphas.empty() ? default_alpha_grid() : parse_vector(a.alphas);
  const auto rows = sweep_fixed(set, ctx, grid);

  // Measured utility is filled in only when a scenario is supplied.
  std::optional<TruthScenario> scen;
  std::optional<WorkflowSpec> spec;
  if (!a.scenario.empty()) {
    if (!a.seed) fail_input("missing_seed", "--seed is required when --scenario is given");
    run.input(a.scenario);
    run.seed("simulation", *a.seed);
    run.setting("samples", std::to_string(a.samples));
    scen = load_scenario_file(a.scenario, *a.seed);
    spec = embedded_spec(set);
  }
  std::string csv = csv_preamble() + "alpha,selected_id,proxy_utility,measured_utility\n";
  std::map<std::string, MeasuredPoint> cache;
  for (const auto& r : rows) {
    std::string measured;
    if (scen) {
      auto it = cache.find(r.selected_id);
      if (it == cache.end())
        it = cache.emplace(r.selected_id, measure(*spec, set.find(r.selected_id)->config, *scen, a.samples, set.metadata.exec))
                 .first;
      const double lat = it->second.latency;
      if (lat > ctx.l_max()) warn("lmax_violation", "measured latency of '" + r.selected_id + "' exceeds l_max");
      else measured = num(expected_utility(it->second.accuracy, lat, Preference(r.alpha), ctx));
    }
    csv += num(r.alpha) + "," + quoted(r.selected_id) + "," + num(r.proxy_utility) + "," + measured + "\n";
  }
  run.emit(a.out, csv);
  return 0;
}

std::map<std::string, MeasuredPoint> measure_entries(const CompiledSet& set, const TruthScenario& scen,
                                                     std::uint64_t samples, unsigned workers) {
  const auto spec = embedded_spec(set);
  std::vector<WorkflowConfiguration> configs;
  for (const auto& e : set.entries) configs.push_back(e.config);
  std::map<std::string, MeasuredPoint> out;
  for (auto& m : measure_all(spec, configs, scen, samples, set.metadata.exec, workers)) out[m.config_id] = m;
  return out;
}

struct HeteroArgs {
  std::string artifact, scenario, out;
  std::optional<double> lmax;
  std::uint64_t seed = 0, samples = 20000, queries = 1000, reps = 10;
  unsigned workers = 1;
};

int cmd_hetero(const HeteroArgs& a) {
  Run run("hetero-eval");
  run.input(a.artifact);
  run.input(a.scenario);
  run.seed("simulation", a.seed);
  run.seed("preference", a.seed);
  run.setting("samples", std::to_string(a.samples));
  run.setting("queries", std::to_string(a.queries));
  run.setting("repetitions", std::to_string(a.reps));
  const auto set = load_artifact(a.artifact);
  const auto scen = load_scenario_file(a.scenario, a.seed);
  const auto measured = measure_entries(set, scen, a.samples, a.workers);
  // l_max spans both the estimated and the measured latencies.
  double floor = 0.0;
  for (const auto& [id, m] : measured) floor = std::max(floor, m.latency);
  const auto ctx = resolve_lmax(set, a.lmax, run, floor);
  std::map<std::string, MeasuredPerformance> perf;
  for (const auto& [id, m] : measured) perf[id] = {m.accuracy, m.latency};
  const auto r = evaluate_heterogeneous(set, ctx, perf, a.queries, a.reps, a.seed);
  std::string csv = csv_preamble() + "repetition,mean_measured_utility\n";
  for (std::size_t i = 0; i < r.per_repetition.size(); ++i) csv += std::to_string(i) + "," + num(r.per_repetition[i]) + "\n";
  run.emit(a.out, csv);
  std::cerr << json{{"mean", r.mean}, {"std", r.std}, {"degenerate_std", r.degenerate_std}, {"l_max", ctx.l_max()}}.dump()
            << "\n";
  return 0;
}

struct RouteArgs {
  std::string artifact, records, query, queries, out;
  std::optional<double> lmax;
  double alpha = 0.5;
  std::size_t k = 20;
};

int cmd_route(const RouteArgs& a) {
  Run run("route");
  run.input(a.artifact);
  run.input(a.records);
  run.input(a.queries);
  run.setting("k", std::to_string(a.k));
  run.setting("alpha", num(a.alpha));
  const auto set = load_artifact(a.artifact);
  const auto recs = load_routing_records(read_file(a.records));
  // l_max covers every latency the utility will be evaluated on.
  double floor = 0.0;
  for (const auto& r : recs.records)
    for (const auto& [id, o] : r.outcomes) floor = std::max(floor, o.latency);
  const auto ctx = resolve_lmax(set, a.lmax, run, floor);
  const Preference pref(a.alpha);

  std::vector<std::vector<double>> qs;
  if (!a.query.empty()) qs.push_back(parse_vector(a.query));
  if (!a.queries.empty()) {
    const json doc = detail::parse_json_text(read_file(a.queries), "queries");
    const json& arr = detail::array_field(doc, "queries", detail::JsonPath{});
    for (const auto& q : arr) qs.push_back(q.get<std::vector<double>>());
  }
  if (qs.empty()) fail_input("schema", "give --query or --queries");
  std::string csv = csv_preamble() + "query,selected_id,neighbor_utility,k_used\n";
  bool warned = false;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const auto r = knn_route(qs[i], recs, set, a.k, pref, ctx);
    if (r.warning && !warned) {
      warn("k_clamped", *r.warning);
      warned = true;
    }
    csv += std::to_string(i) + "," + quoted(r.entry->config.id) + "," + num(r.utility) + "," + std::to_string(r.k_used) + "\n";
  }
  run.emit(a.out, csv);
  return 0;
}

struct SimulateArgs {
  std::string artifact, scenario, out;
  std::uint64_t seed = 0, samples = 20000;
  unsigned workers = 1;
};

std::string measured_csv(const CompiledSet& set, const std::map<std::string, MeasuredPoint>& m) {
  std::string csv = csv_preamble() + "config_id,accuracy,latency_s,n_samples,accuracy_se,latency_se\n";
  for (const auto& e : set.entries) {
    const auto& p = m.at(e.config.id);
    csv += quoted(p.config_id) + "," + num(p.accuracy) + "," + num(p.latency) + "," + std::to_string(p.n_samples) + "," +
           opt_num(p.accuracy_se) + "," + opt_num(p.latency_se) + "\n";
  }
  return csv;
}

int cmd_simulate(const SimulateArgs& a) {
  Run run("simulate");
  run.input(a.artifact);
  run.input(a.scenario);
  run.seed("simulation", a.seed);
  run.setting("samples", std::to_string(a.samples));
  const auto set = load_artifact(a.artifact);
  const auto scen = load_scenario_file(a.scenario, a.seed);
  run.emit(a.out, measured_csv(set, measure_entries(set, scen, a.samples, a.workers)));
  return 0;
}

struct ValidateArgs {
  std::string artifact, scenario, mode = "order", out;
  std::uint64_t seed = 0, samples = 20000;
  std::size_t sample_size = 20, cap = 1000;
  unsigned workers = 1;
};

int cmd_validate(const ValidateArgs& a) {
  Run run("validate");
  run.input(a.artifact);
  run.input(a.scenario);
  run.seed("simulation", a.seed);
  run.setting("mode", a.mode);
  run.setting("samples", std::to_string(a.samples));
  const auto set = load_artifact(a.artifact);
  const auto spec = embedded_spec(set);
  const auto scen = load_scenario_file(a.scenario, a.seed);
  json summary = {{"mode", a.mode}};
  std::string csv = csv_preamble();

  if (a.mode == "frontier") {
    BruteForceOptions opt;
    opt.cap = a.cap;
    opt.workers = a.workers;
    run.setting("cap", std::to_string(a.cap));
    const auto bf = brute_force_frontier(spec, nullptr, scen, set.metadata.exec, a.samples, opt);
    std::map<std::string, std::size_t> index;
    double ref_lat = 0.0;
    for (std::size_t i = 0; i < bf.points.size(); ++i) {
      index[bf.points[i].config_id] = i;
      ref_lat = std::max(ref_lat, bf.points[i].latency);
    }
    const std::set<std::size_t> measured_front(bf.frontier.begin(), bf.frontier.end());
    std::set<std::size_t> proxy_front;
    for (const auto& e : set.entries) {
      const auto it = index.find(e.config.id);
      if (it == index.end()) fail_input("unknown_config", "artifact entry '" + e.config.id + "' is outside the measured space");
      proxy_front.insert(it->second);
    }
    std::vector<TradeoffPoint> hp, hm;
    for (std::size_t i : proxy_front) hp.push_back({bf.points[i].accuracy, bf.points[i].latency});
    for (std::size_t i : measured_front) hm.push_back({bf.points[i].accuracy, bf.points[i].latency});
    const double hv_m = hypervolume_2d(hm, 0.0, ref_lat), hv_p = hypervolume_2d(hp, 0.0, ref_lat);
    summary["configurations"] = bf.points.size();
    summary["hypervolume_proxy_frontier"] = hv_p;
    summary["hypervolume_measured_frontier"] = hv_m;
    summary["hypervolume_ratio"] = hv_m > 0.0 ? hv_p / hv_m : 1.0;
    summary["reference"] = {{"accuracy", 0.0}, {"latency_s", ref_lat}};
    csv += "config_id,meas_accuracy,meas_latency_s,proxy_frontier,measured_frontier\n";
    for (std::size_t i = 0; i < bf.points.size(); ++i)
      csv += quoted(bf.points[i].config_id) + "," + num(bf.points[i].accuracy) + "," + num(bf.points[i].latency) + "," +
             (proxy_front.count(i) ? "1" : "0") + "," + (measured_front.count(i) ? "1" : "0") + "\n";
  } else if (a.mode == "order") {
    run.setting("sample_size", std::to_string(a.sample_size));
    std::vector<std::size_t> idx(set.entries.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(a.seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(a.sample_size, idx.size()));
    std::sort(idx.begin(), idx.end());
    std::vector<WorkflowConfiguration> configs;
    for (std::size_t i : idx) configs.push_back(set.entries[i].config);
    const auto measured = measure_all(spec, configs, scen, a.samples, set.metadata.exec, a.workers);
    PairedSeries acc, lat;
    csv += "config_id,est_accuracy,meas_accuracy,est_latency_s,meas_latency_s\n";
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto& e = set.entries[idx[k]];
      acc.estimated.push_back(e.estimate.accuracy);
      acc.measured.push_back(measured[k].accuracy);
      lat.estimated.push_back(e.estimate.latency);
      lat.measured.push_back(measured[k].latency);
      csv += quoted(e.config.id) + "," + num(e.estimate.accuracy) + "," + num(measured[k].accuracy) + "," +
             num(e.estimate.latency) + "," + num(measured[k].latency) + "\n";
    }
    // A metric that is undefined on this sample is reported as null.
    auto metric = [](auto f, const PairedSeries& s) -> json {
      try {
        return f(s);
      } catch (const Error& e) {
        warn(e.code(), e.what());
        return nullptr;
      }
    };
    for (const auto& [name, s] : {std::pair{"accuracy", &acc}, std::pair{"latency", &lat}})
      summary[name] = {{"spearman", metric(spearman, *s)},
                       {"pairwise_agreement", metric(pairwise_agreement, *s)},
                       {"calibrated_mae", metric(calibrated_mae, *s)}};
    summary["sampled"] = idx.size();
  } else {
    fail_input("schema", "--mode must be 'frontier' or 'order'");
  }
  run.emit(a.out, csv);
  std::cerr << summary.dump() << "\n";
  if (!a.out.empty()) write_file(a.out + ".summary.json", summary.dump(2) + "\n");
  return 0;
}

struct ReportArgs {
  std::vector<std::string> artifacts;
  std::string measurements, out;
};

int cmd_report(const ReportArgs& a) {
  Run run("report");
  std::map<std::string, MeasuredPoint> meas;
  if (!a.measurements.empty()) {
    run.input(a.measurements);
    meas = load_measurements(a.measurements);
  }
  std::string csv = csv_preamble() +
                    "source,config_id,est_accuracy,meas_accuracy,est_latency_s,meas_latency_s,est_frontier,meas_frontier\n";
  std::set<std::string> known;
  for (const auto& path : a.artifacts) {
    run.input(path);
    const auto set = load_artifact(path);
    const std::string source = set.metadata.spec_name + ":" + std::string(to_string(set.metadata.exec));
    std::vector<ObjectivePoint> est, mp;
    for (const auto& e : set.entries) {
      known.insert(e.config.id);
      est.push_back({e.estimate.accuracy, e.estimate.latency, e.config.id});
    }
    const auto ef = nondominated_sort_2d(est);
    const std::set<std::size_t> est_front(ef.begin(), ef.end());
    std::vector<std::size_t> with_meas;
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
      const auto it = meas.find(set.entries[i].config.id);
      if (it == meas.end()) continue;
      with_meas.push_back(i);
      mp.push_back({it->second.accuracy, it->second.latency, set.entries[i].config.id});
    }
    std::set<std::size_t> meas_front;
    for (std::size_t k : nondominated_sort_2d(mp)) meas_front.insert(with_meas[k]);
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
      const auto& e = set.entries[i];
      const auto it = meas.find(e.config.id);
      const bool has = it != meas.end();
      csv += quoted(source) + "," + quoted(e.config.id) + "," + num(e.estimate.accuracy) + "," +
             (has ? num(it->second.accuracy) : "") + "," + num(e.estimate.latency) + "," +
             (has ? num(it->second.latency) : "") + "," + (est_front.count(i) ? "1" : "0") + "," +
             (has ? (meas_front.count(i) ? "1" : "0") : "") + "\n";
    }
  }
  for (const auto& [id, m] : meas)
    if (!known.count(id)) fail_input("unknown_config", "measurement for '" + id + "' matches no artifact entry");
  run.emit(a.out, csv);
  return 0;
}

void report_error(const std::string& kind, const std::string& code, const std::string& message, int exit_code) {
  std::cerr << json{{"level", "error"}, {"kind", kind}, {"code", code}, {"message", message}, {"exit_code", exit_code}}.dump()
            << "\n"
            << "wfc: error: " << message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile agent-workflow design spaces into accuracy/latency frontiers"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "TOML/INI file with option defaults; command-line flags take precedence");
  app.require_subcommand(1);

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Explore a workflow space and write its compiled frontier");
  compile->add_option("--spec", ca.spec, "Workflow spec JSON")->required()->check(CLI::ExistingFile);
  compile->add_option("--profiles", ca.profiles, "Profile table (JSON or CSV)")->required()->check(CLI::ExistingFile);
  compile->add_option("--exec", ca.exec, "Execution model")->check(CLI::IsMember({"sequential-edge", "critical-path"}))
      ->capture_default_str();
  compile->add_option("--epsilon", ca.epsilon, "Frontier thinning tolerance")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  compile->add_option("--workers", ca.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  compile->add_flag("--no-prune", ca.no_prune, "Enumerate every declared option (reference run)");
  compile->add_option("--out", ca.out, "Artifact path")->required();

  CountArgs cn;
  auto* count = app.add_subcommand("count", "Count configurations of a workflow space");
  count->add_option("--spec", cn.spec, "Workflow spec JSON")->required()->check(CLI::ExistingFile);
  count->add_option("--profiles", cn.profiles, "Profile table; adds pruned counts")->check(CLI::ExistingFile);
  count->add_option("--epsilon", cn.epsilon, "Pruning tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();

  SelectArgs sa;
  auto* select = app.add_subcommand("select", "Pick one compiled configuration");
  select->add_option("--artifact", sa.artifact, "Compiled artifact")->required()->check(CLI::ExistingFile);
  auto* budget = select->add_option("--budget", sa.budget, "Latency budget in seconds");
  auto* alpha = select->add_option("--alpha", sa.alpha, "Accuracy weight in (0,1)");
  select->add_option("--lmax", sa.lmax, "Latency normalizer (default: max estimated latency)");
  select->add_option("--exec", sa.exec, "Deployment execution model (warns on mismatch)");
  select->add_option("--out", sa.out, "Output path (default stdout)");
  budget->excludes(alpha);
  select->callback([&] {
    if (!sa.budget && !sa.alpha) throw CLI::ValidationError("select", "one of --budget or --alpha is required");
  });

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Fixed-preference sweep over an alpha grid");
  sweep->add_option("--artifact", sw.artifact, "Compiled artifact")->required()->check(CLI::ExistingFile);
  sweep->add_option("--alphas", sw.alphas, "Comma-separated alphas (default 0.05..0.95 step 0.05)");
  sweep->add_option("--lmax", sw.lmax, "Latency normalizer");
  sweep->add_option("--scenario", sw.scenario, "Truth scenario for measured utilities")->check(CLI::ExistingFile);
  sweep->add_option("--seed", sw.seed, "Simulation seed (required with --scenario)");
  sweep->add_option("--samples", sw.samples, "Queries per measured configuration")->capture_default_str();
  sweep->add_option("--exec", sw.exec, "Deployment execution model (warns on mismatch)");
  sweep->add_option("--out", sw.out, "CSV path (default stdout)");

  HeteroArgs he;
  auto* hetero = app.add_subcommand("hetero-eval", "Heterogeneous-preference expected utility");
  hetero->add_option("--artifact", he.artifact, "Compiled artifact")->required()->check(CLI::ExistingFile);
  hetero->add_option("--scenario", he.scenario, "Truth scenario")->required()->check(CLI::ExistingFile);
  hetero->add_option("--seed", he.seed, "Seed for simulation and preference draws")->required();
  hetero->add_option("--samples", he.samples, "Queries per measured configuration")->capture_default_str();
  hetero->add_option("--queries", he.queries, "Preference draws per repetition")->capture_default_str();
  hetero->add_option("--repetitions", he.reps, "Repetitions")->capture_default_str();
  hetero->add_option("--lmax", he.lmax, "Latency normalizer");
  hetero->add_option("--workers", he.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  hetero->add_option("--out", he.out, "CSV path (default stdout)");

  RouteArgs ro;
  auto* route = app.add_subcommand("route", "KNN routing over the compiled set");
  route->add_option("--artifact", ro.artifact, "Compiled artifact")->required()->check(CLI::ExistingFile);
  route->add_option("--records", ro.records, "Routing records JSON")->required()->check(CLI::ExistingFile);
  route->add_option("--query", ro.query, "Comma-separated feature vector");
  route->add_option("--queries", ro.queries, "JSON file {\"queries\": [[...], ...]}")->check(CLI::ExistingFile);
  route->add_option("--k", ro.k, "Neighbors")->check(CLI::PositiveNumber)->capture_default_str();
  route->add_option("--alpha", ro.alpha, "Accuracy weight in (0,1)")->capture_default_str();
  route->add_option("--lmax", ro.lmax, "Latency normalizer");
  route->add_option("--out", ro.out, "CSV path (default stdout)");

  SimulateArgs si;
  auto* simulate = app.add_subcommand("simulate", "Measure every compiled configuration under a scenario");
  simulate->add_option("--artifact", si.artifact, "Compiled artifact")->required()->check(CLI::ExistingFile);
  simulate->add_option("--scenario", si.scenario, "Truth scenario")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", si.seed, "Simulation seed")->required();
  simulate->add_option("--samples", si.samples, "Queries per configuration")->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--workers", si.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--out", si.out, "CSV path (default stdout)");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check proxy fidelity against a simulated ground truth");
  validate->add_option("--artifact", va.artifact, "Compiled artifact")->required()->check(CLI::ExistingFile);
  validate->add_option("--scenario", va.scenario, "Truth scenario")->required()->check(CLI::ExistingFile);
  validate->add_option("--seed", va.seed, "Simulation and sampling seed")->required();
  validate->add_option("--mode", va.mode, "frontier or order")->check(CLI::IsMember({"frontier", "order"}))
      ->capture_default_str();
  validate->add_option("--samples", va.samples, "Queries per configuration")->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate->add_option("--sample-size", va.sample_size, "Entries sampled in order mode")->capture_default_str();
  validate->add_option("--cap", va.cap, "Largest space measured in frontier mode")->capture_default_str();
  validate->add_option("--workers", va.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  validate->add_option("--out", va.out, "CSV path (default stdout)");

  ReportArgs re;
  auto* report = app.add_subcommand("report", "Tidy CSV of estimates and measurements");
  report->add_option("--artifact", re.artifacts, "Compiled artifact (repeatable)")->required()->check(CLI::ExistingFile);
  report->add_option("--measurements", re.measurements, "CSV written by simulate")->check(CLI::ExistingFile);
  report->add_option("--out", re.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("input", "usage", e.what(), 2);
    std::cerr << app.help() << "\n";
    return 2;
  }

  try {
    if (*compile) return cmd_compile(ca);
    if (*count) return cmd_count(cn);
    if (*select) return cmd_select(sa);
    if (*sweep) return cmd_sweep(sw);
    if (*hetero) return cmd_hetero(he);
    if (*route) return cmd_route(ro);
    if (*simulate) return cmd_simulate(si);
    if (*validate) return cmd_validate(va);
    if (*report) return cmd_report(re);
  } catch (const Error& e) {
    static const char* kinds[] = {"", "", "input", "infeasible", "internal"};
    report_error(kinds[e.exit_code()], e.code(), e.what(), e.exit_code());
    return e.exit_code();
  } catch (const json::exception& e) {
    report_error("input", "schema", e.what(), 2);
    return 2;
  } catch (const std::exception& e) {
    report_error("internal", "unexpected", e.what(), 4);
    return 4;
  }
  return 4;
}
