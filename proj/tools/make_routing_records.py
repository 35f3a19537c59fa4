#!/usr/bin/env python3
# Copyright 2026 The wfc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes synthetic KNN routing records for a compiled artifact.

Validation queries fall into two feature clusters. Near the origin the
queries are easy, so every configuration succeeds with a boosted
probability; near (10, 10) they are hard and only the most accurate half of
the staircase keeps its estimated success rate. Latencies are the compiled
estimates. Output is deterministic for a given artifact and seed.

usage: make_routing_records.py ARTIFACT OUT [--per-cluster N] [--seed S]
"""

import argparse
import json
import random


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("artifact")
    ap.add_argument("out")
    ap.add_argument("--per-cluster", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    with open(args.artifact) as f:
        entries = json.load(f)["entries"]
    rng = random.Random(args.seed)
    records = []
    for cluster, centre in enumerate([(0.0, 0.0), (10.0, 10.0)]):
        for _ in range(args.per_cluster):
            features = [c + rng.gauss(0.0, 0.5) for c in centre]
            outcomes = {}
            for rank, e in enumerate(entries):
                p = e["est_accuracy"]
                if cluster == 0:
                    p = min(1.0, p + 0.5)
                elif rank < len(entries) // 2:
                    p *= 0.2
                outcomes[e["id"]] = {"success": rng.random() < p, "latency_s": e["est_latency_s"]}
            records.append({"features": [round(x, 6) for x in features], "outcomes": outcomes})
    with open(args.out, "w") as f:
        json.dump({"dim": 2, "records": records}, f, indent=1, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
