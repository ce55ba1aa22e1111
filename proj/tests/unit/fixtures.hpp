// Copyright 2026 The tagmine Authors
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

// Small builders shared by the unit tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include "tagmine/model.hpp"

namespace tagmine::testing {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Ego in the middle of a 3.5 m lane at constant speed.
inline Dataset straight_road(std::size_t n, double speed = 25.0, double ts = 0.01) {
  Dataset d;
  d.timebase = {ts, n, 0.0};
  d.ego.speed.assign(n, speed);
  d.ego.dy_left.assign(n, 1.75);
  d.ego.dy_right.assign(n, -1.75);
  d.ego.line_valid.assign(n, 1);
  d.ego.road_class.assign(n, "motorway");
  return d;
}

/// Object observed on [first, first + dx.size()) with the given series.
inline ObjectTrack track(std::int64_t id, std::size_t first, std::vector<double> dx,
                         std::vector<double> dy, std::vector<double> v_rel = {}) {
  ObjectTrack o;
  o.id = id;
  o.first_k = first;
  const std::size_t m = dx.size();
  o.dx = std::move(dx);
  o.dy = std::move(dy);
  o.v_rel = v_rel.empty() ? std::vector<double>(m, 0.0) : std::move(v_rel);
  o.observed.assign(m, 1);
  return o;
}

/// Linear ramp from a to b over n samples (both ends included).
inline std::vector<double> ramp(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

inline std::vector<double> concat(std::initializer_list<std::vector<double>> parts) {
  std::vector<double> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline std::vector<double> constant(double v, std::size_t n) { return std::vector<double>(n, v); }

/// Compact "value[start,end]" rendering for readable failures.
inline std::string show(const TagStream& s) {
  std::string out;
  for (const auto& iv : s.intervals) {
    if (!out.empty()) out += ' ';
    out += std::string(value_name(s.dimension, iv.value)) + "[" + std::to_string(iv.start_k) +
           "," + std::to_string(iv.end_k) + "]";
  }
  return out;
}

}  // namespace tagmine::testing
