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
"""Regenerates the synthetic profile fixtures under fixtures/profiles.

Accuracy saturates with the thinking budget and scales with model skill;
latency is a per-model overhead plus per-token decode time over the tokens
actually used. A small hash-based jitter breaks exact ties. Output is fully
deterministic, so re-running leaves the files byte-identical.
"""

import csv
import hashlib
import json
import math
import pathlib

MODELS = {
    # name: (skill, overhead_s, seconds_per_token)
    "lm-0.6b": (0.41, 0.06, 0.011),
    "lm-1.7b": (0.49, 0.15, 0.022),
    "lm-4b": (0.53, 0.17, 0.024),
    "lm-8b": (0.57, 0.39, 0.026),
    "lm-14b": (0.88, 0.48, 0.028),
}

# role: (difficulty multiplier, typical reasoning tokens, output tokens)
ROLES = {
    "math": {
        "programmer": (0.92, 360, 160),
        "refiner": (0.98, 140, 120),
        "generator_1": (0.90, 300, 100),
        "generator_2": (0.88, 300, 100),
        "detailed_generator": (0.93, 520, 220),
        "self_ensemble": (0.99, 100, 40),
    },
    "hotpotqa": {
        "generator_1": (0.80, 270, 60),
        "generator_2": (0.78, 270, 60),
        "generator_3": (0.76, 270, 60),
        "self_ensemble": (0.97, 120, 30),
        "formatter": (0.995, 45, 20),
    },
    "livecodebench": {
        "programmer_1": (0.62, 500, 400),
        "programmer_2": (0.60, 500, 400),
        "programmer_3": (0.58, 500, 400),
        "self_ensemble": (0.96, 120, 60),
        "fix": (0.45, 350, 300),
    },
}

BUDGETS = {
    "math": [10, 200, 400, 800, 1000, 1500, 2000, 3000, 4000, 5000, 6000, 8000, 10000],
    "hotpotqa": [10, 50, 100, 200, 300, 400, 500, 600, 700, 800, 900, 1000, 1500, 2000, 4000, 8000],
    "livecodebench": [10, 200, 400, 800, 1000, 1500, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 12000, 16000],
}


def jitter(*parts):
    h = hashlib.sha256("|".join(map(str, parts)).encode()).digest()
    return (int.from_bytes(h[:8], "big") / 2**64 - 0.5) * 0.02


def profile(bench, role, model, budget):
    skill, overhead, spt = MODELS[model]
    difficulty, typical, out_tokens = ROLES[bench][role]
    wanted = typical * (1.25 - 0.35 * skill)
    used = min(budget, wanted)
    saturation = 1.0 - math.exp(-used / (0.45 * typical))
    acc = skill * difficulty * (0.30 + 0.70 * saturation) + 2.0 * jitter(bench, role, model, budget)
    acc = min(max(acc, 0.0), 1.0)
    lat = overhead + spt * (used + out_tokens)
    return round(acc, 6), round(lat, 6)


def build(bench, models, budgets, source):
    rows = []
    for role in ROLES[bench]:
        for model in models:
            for budget in budgets:
                acc, lat = profile(bench, role, model, budget)
                rows.append({"role": role, "model": model, "budget": budget,
                             "accuracy": acc, "latency_s": lat, "sample_count": 200})
    return {"format_version": 1, "source": source, "created": "2026-01-01T00:00:00Z", "entries": rows}


def write_json(path, doc):
    path.write_text(json.dumps(doc, indent=1) + "\n")


def write_csv(path, doc):
    with path.open("w", newline="") as f:
        f.write("# synthetic fixture profiles\n")
        w = csv.DictWriter(f, fieldnames=["role", "model", "budget", "accuracy", "latency_s", "sample_count"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(doc["entries"])


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "profiles"
    out.mkdir(parents=True, exist_ok=True)
    all_models = list(MODELS)
    for bench in BUDGETS:
        doc = build(bench, all_models, BUDGETS[bench], "synthetic:" + bench)
        write_json(out / (bench + ".json"), doc)
    write_csv(out / "hotpotqa.csv", build("hotpotqa", all_models, BUDGETS["hotpotqa"], "synthetic:hotpotqa"))
    write_json(out / "hotpotqa_restricted.json",
               build("hotpotqa", ["lm-1.7b", "lm-8b", "lm-14b"], [10, 10000], "synthetic:hotpotqa-restricted"))
    write_json(out / "livecodebench_restricted.json",
               build("livecodebench", ["lm-4b", "lm-8b"], [10, 10000], "synthetic:livecodebench-restricted"))


if __name__ == "__main__":
    main()
