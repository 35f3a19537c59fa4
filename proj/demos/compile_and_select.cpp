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

// Compiles the math workflow fixture, then uses the frontier the three ways a
// deployment would: under a latency budget, under an accuracy/latency
// preference, and checked against a simulated ground truth.
//
// usage: wfc_demo [SPEC PROFILES]

#include <cstdio>
#include <string>

#include "wfc/wfc.hpp"

int main(int argc, char** argv) {
  using namespace wfc;
  const std::string dir = WFC_FIXTURE_DIR;
  const std::string spec_path = argc > 2 ? argv[1] : dir + "/workflows/math.json";
  const std::string prof_path = argc > 2 ? argv[2] : dir + "/profiles/math.json";
  try {
    const auto spec = parse_workflow_spec(read_file(spec_path));
    const auto table = load_profiles_file(prof_path);

    const auto stats = reduction_report(spec, table);
    std::printf("%s: %s configurations, %s after dominance pruning\n", spec.name.c_str(), stats.full_space.str().c_str(),
                stats.pruned_space.str().c_str());

    const auto set = explore(spec, table, ExecutionModel::kSequentialEdge);
    std::printf("frontier: %zu configurations from %.3f s to %.3f s\n", set.entries.size(),
                set.entries.front().estimate.latency, set.entries.back().estimate.latency);

    const double budget = set.entries[set.entries.size() / 2].estimate.latency;
    const auto& fast = select_latency_constrained(set, budget);
    std::printf("\nbudget %.2f s -> accuracy %.4f at %.2f s\n  %s\n", budget, fast.estimate.accuracy,
                fast.estimate.latency, fast.config.id.c_str());

    const UtilityContext ctx(set.entries.back().estimate.latency);
    std::printf("\n alpha  accuracy  latency\n");
    for (double alpha : {0.1, 0.5, 0.9}) {
      const auto& e = select_by_preference(set, Preference(alpha), ctx);
      std::printf("  %.1f   %.4f   %7.2f\n", alpha, e.estimate.accuracy, e.estimate.latency);
    }

    // Ground truth equal to the profiles: measured values should agree with
    // the proxy up to sampling noise.
    const auto truth = scenario_from_profiles(table, 2026);
    std::printf("\n estimated          measured (n=20000)\n");
    for (std::size_t i = 0; i < set.entries.size(); i += std::max<std::size_t>(1, set.entries.size() / 5)) {
      const auto& e = set.entries[i];
      const auto m = measure(spec, e.config, truth, 20000);
      std::printf("  %.4f %7.2f s    %.4f +- %.4f %7.2f s\n", e.estimate.accuracy, e.estimate.latency, m.accuracy,
                  *m.accuracy_se, m.latency);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
    return e.exit_code();
  }
  return 0;
}
