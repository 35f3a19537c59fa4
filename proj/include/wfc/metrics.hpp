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
#include <string>
#include <utility>
#include <vector>

#include "wfc/error.hpp"

namespace wfc {

// Estimated and measured values of one metric over the same configurations.
struct PairedSeries {
  std::vector<double> estimated;
  std::vector<double> measured;
  std::vector<std::string> ids;  // optional, parallel when present

  void validate() const {
    if (estimated.size() != measured.size()) fail_input("length_mismatch", "series lengths differ");
    if (!ids.empty() && ids.size() != estimated.size()) fail_input("length_mismatch", "ids length differs");
    if (estimated.size() < 2) fail_input("too_short", "series needs at least two points");
    for (std::size_t i = 0; i < estimated.size(); ++i)
      if (!std::isfinite(estimated[i]) || !std::isfinite(measured[i])) fail_input("nan", "series values must be finite");
  }
};

// 1-based ranks; tied values share the mean of their positions.
inline std::vector<double> fractional_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

inline double spearman(const PairedSeries& s) {
  s.validate();
  const auto re = fractional_ranks(s.estimated);
  const auto rm = fractional_ranks(s.measured);
  const double n = static_cast<double>(re.size());
  const double me = std::accumulate(re.begin(), re.end(), 0.0) / n;
  const double mm = std::accumulate(rm.begin(), rm.end(), 0.0) / n;
  double cov = 0.0, ve = 0.0, vm = 0.0;
  for (std::size_t i = 0; i < re.size(); ++i) {
    cov += (re[i] - me) * (rm[i] - mm);
    ve += (re[i] - me) * (re[i] - me);
    vm += (rm[i] - mm) * (rm[i] - mm);
  }
  if (ve == 0.0 || vm == 0.0) fail_input("zero_variance", "Spearman correlation undefined: constant ranks");
  return cov / std::sqrt(ve * vm);
}

inline int sign(double x) { return (x > 0.0) - (x < 0.0); }

// Fraction of pairs whose difference has the same sign on both sides; a tie
// only agrees with a tie.
inline double pairwise_agreement(const PairedSeries& s) {
  s.validate();
  const std::size_t n = s.estimated.size();
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ++total;
      if (sign(s.estimated[i] - s.estimated[j]) == sign(s.measured[i] - s.measured[j])) ++agree;
    }
  return static_cast<double>(agree) / static_cast<double>(total);
}

// MAE after mapping the estimates through the affine function that sends the
// estimated minimum and maximum onto the measured values of the same two
// configurations (first occurrence wins for repeated extrema).
inline double calibrated_mae(const PairedSeries& s) {
  s.validate();
  const auto& e = s.estimated;
  const auto& m = s.measured;
  const std::size_t imin = static_cast<std::size_t>(std::min_element(e.begin(), e.end()) - e.begin());
  const std::size_t imax = static_cast<std::size_t>(std::max_element(e.begin(), e.end()) - e.begin());
  if (e[imax] == e[imin]) fail_input("degenerate_anchors", "calibrated MAE undefined: estimated values are constant");
  const double scale = (m[imax] - m[imin]) / (e[imax] - e[imin]);
  double sum = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double cal = (i == imin) ? m[imin] : (i == imax) ? m[imax] : scale * (e[i] - e[imin]) + m[imin];
    sum += std::abs(cal - m[i]);
  }
  return sum / static_cast<double>(e.size());
}

struct TradeoffPoint {
  double accuracy;
  double latency;
};

// Area of [ref_acc, acc] x [lat, ref_lat] covered by the union of the points'
// dominated boxes.
inline double hypervolume_2d(std::vector<TradeoffPoint> points, double ref_accuracy, double ref_latency) {
  for (const auto& p : points)
    if (!(p.accuracy >= ref_accuracy && p.accuracy <= 1.0 && p.latency >= 0.0 && p.latency <= ref_latency))
      fail_input("outside_reference", "point outside the reference box");
  std::sort(points.begin(), points.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
    if (a.latency != b.latency) return a.latency < b.latency;
    return a.accuracy > b.accuracy;
  });
  // Sweep in latency order: each improvement of the running best accuracy
  // opens a slab from its latency to the reference latency.
  double area = 0.0, best = ref_accuracy;
  for (const auto& p : points) {
    if (p.accuracy <= best) continue;
    area += (p.accuracy - best) * (ref_latency - p.latency);
    best = p.accuracy;
  }
  return area;
}

}  // namespace wfc
