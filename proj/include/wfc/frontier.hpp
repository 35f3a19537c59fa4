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
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wfc/error.hpp"

namespace wfc {

// Two-objective non-dominated filter (maximize accuracy, minimize latency).
//
// Kung-style sweep: sort by latency ascending, accuracy descending, then by
// the caller's tie order; walk the list and keep a point only when its
// accuracy beats the best kept accuracy by more than epsilon. The survivors
// form a staircase with latency and accuracy both strictly increasing; among
// exact duplicates the first in tie order survives.
//
// `items` is reordered in place and truncated to the frontier.
template <class T, class AccFn, class LatFn, class TieLess>
void keep_frontier(std::vector<T>& items, AccFn acc, LatFn lat, TieLess tie_less, double epsilon = 0.0) {
  std::sort(items.begin(), items.end(), [&](const T& a, const T& b) {
    const double la = lat(a), lb = lat(b);
    if (la != lb) return la < lb;
    const double aa = acc(a), ab = acc(b);
    if (aa != ab) return aa > ab;
    return tie_less(a, b);
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (out == 0 || acc(items[i]) > acc(items[out - 1]) + epsilon) {
      if (out != i) items[out] = std::move(items[i]);
      ++out;
    }
  }
  items.erase(items.begin() + static_cast<std::ptrdiff_t>(out), items.end());
}

struct ObjectivePoint {
  double accuracy = 0.0;
  double latency = 0.0;
  std::string_view id;
};

// Indices of the frontier points, ordered by latency ascending.
inline std::vector<std::size_t> nondominated_sort_2d(std::span<const ObjectivePoint> points, double epsilon = 0.0) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail_input("range", "epsilon must be a finite value >= 0");
  for (const auto& p : points)
    if (std::isnan(p.accuracy) || std::isnan(p.latency)) fail_input("nan", "NaN objective for point '" + std::string(p.id) + "'");
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  keep_frontier(
      idx, [&](std::size_t i) { return points[i].accuracy; }, [&](std::size_t i) { return points[i].latency; },
      [&](std::size_t a, std::size_t b) {
        if (points[a].id != points[b].id) return points[a].id < points[b].id;
        return a < b;
      },
      epsilon);
  return idx;
}

}  // namespace wfc
