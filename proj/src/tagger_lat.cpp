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

#include "tagmine/tagger_lat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>

#include "tagmine/window.hpp"

namespace tagmine {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr TagValue kFollow = code(LateralActivity::FollowingLane);
constexpr TagValue kLeft = code(LateralActivity::ChangingLaneLeft);
constexpr TagValue kRight = code(LateralActivity::ChangingLaneRight);

// Rise of a signal above its trailing minimum (`back`) and the look-ahead rise
// at the end of the leading window (`ahead`). NaN where undefined.
struct Rise {
  std::vector<double> back;
  std::vector<double> ahead;
};

Rise rise_of(std::span<const double> s, std::span<const std::uint8_t> valid, std::size_t k_h) {
  const std::size_t n = s.size();
  const auto tmin = trailing_min(s, k_h, valid);
  const auto lmin = leading_min(s, k_h, valid);
  Rise r{std::vector<double>(n, kNaN), std::vector<double>(n, kNaN)};
  for (std::size_t i = 0; i < n; ++i) {
    if (valid[i]) r.back[i] = s[i] - tmin[i];
    const std::size_t e = std::min(i + k_h, n - 1);
    if (valid[e]) r.ahead[i] = s[e] - lmin[i];
  }
  return r;
}

std::vector<double> negated(std::span<const double> x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return -v; });
  return out;
}

}  // namespace

ObjectLines object_lines(const EgoTrack& ego, const ObjectTrack& obj) {
  const std::size_t m = obj.span();
  ObjectLines lines{std::vector<double>(m, kNaN), std::vector<double>(m, kNaN),
                    std::vector<std::uint8_t>(m, 0)};
  for (std::size_t j = 0; j < m; ++j) {
    if (!obj.observed[j]) continue;
    const std::size_t k = obj.first_k + j;
    if (obj.has_line_columns() && std::isfinite(obj.dy_left_i[j]) &&
        std::isfinite(obj.dy_right_i[j])) {
      lines.left[j] = obj.dy_left_i[j];
      lines.right[j] = obj.dy_right_i[j];
      lines.valid[j] = 1;
    } else if (ego.line_valid[k]) {
      lines.left[j] = ego.dy_left[k] - obj.dy[j];
      lines.right[j] = ego.dy_right[k] - obj.dy[j];
      lines.valid[j] = 1;
    }
  }
  return lines;
}

TagStream ego_lateral(const EgoTrack& ego, const Params& params, Diagnostics* diag) {
  const std::size_t n = ego.size();
  TagStream out{Subject::ego(), Dimension::LateralActivity, {}};
  if (n == 0) return out;
  std::vector<TagValue> labels(n, kFollow);
  const std::span<const std::uint8_t> valid = ego.line_valid;
  if (std::none_of(valid.begin(), valid.end(), [](std::uint8_t v) { return v != 0; })) {
    if (diag) diag->warn("ego: no valid lane-line samples; lateral activity is FollowingLane");
    out.intervals = intervals_from_labels(labels);
    return out;
  }

  const std::size_t k_h = params.k_h;
  const double thr = params.lateral_rise();
  // A right change shows both line distances rising before the crossing;
  // a left change shows them falling, handled on the negated signals.
  const auto neg_left = negated(ego.dy_left);
  const auto neg_right = negated(ego.dy_right);
  const Rise left_up = rise_of(ego.dy_left, valid, k_h);
  const Rise right_up = rise_of(ego.dy_right, valid, k_h);
  const Rise left_down = rise_of(neg_left, valid, k_h);
  const Rise right_down = rise_of(neg_right, valid, k_h);

  std::optional<std::size_t> prev;
  std::optional<std::size_t> last_end;
  for (std::size_t k = 0; k < n; ++k) {
    if (!valid[k]) continue;
    if (!prev) {
      prev = k;
      continue;
    }
    const double dl = ego.dy_left[k] - ego.dy_left[*prev];
    const double dr = ego.dy_right[k] - ego.dy_right[*prev];
    prev = k;
    const bool to_left = dl > params.delta_l && dr > params.delta_l;
    const bool to_right = dl < -params.delta_l && dr < -params.delta_l;
    if (!to_left && !to_right) continue;
    if (last_end && k <= *last_end) continue;

    const Rise& a = to_right ? left_up : left_down;
    const Rise& b = to_right ? right_up : right_down;
    const std::size_t lo = last_end ? *last_end + 1 : 0;
    std::size_t start = lo;
    for (std::size_t t = k; t-- > lo;) {
      if (a.back[t] < thr || b.back[t] < thr) {
        start = t;
        break;
      }
    }
    std::size_t end = n - 1;
    for (std::size_t t = k + 1; t < n; ++t) {
      if (a.ahead[t] < thr || b.ahead[t] < thr) {
        end = t;
        break;
      }
    }
    std::fill(labels.begin() + start, labels.begin() + end + 1, to_right ? kRight : kLeft);
    last_end = end;
  }
  out.intervals = intervals_from_labels(labels);
  return out;
}

TagStream object_lateral(const EgoTrack& ego, const ObjectTrack& obj, const Params& params,
                         Diagnostics* diag) {
  TagStream out{Subject::object(obj.id), Dimension::LateralActivity, {}};
  const ObjectLines lines = object_lines(ego, obj);
  const std::size_t k_h = params.k_h;
  const double thr = params.lateral_rise();
  std::vector<TagValue> labels(obj.span(), kNoTag);
  std::size_t skipped = 0;

  for (auto [a, b] : true_runs(obj.observed)) {
    const std::size_t len = b - a + 1;
    std::fill(labels.begin() + a, labels.begin() + b + 1, kFollow);
    const std::span<const double> left(lines.left.data() + a, len);
    const std::span<const double> right(lines.right.data() + a, len);
    const std::span<const std::uint8_t> valid(lines.valid.data() + a, len);
    const auto neg_left = negated(left);
    const auto neg_right = negated(right);

    // Signed signals: the crossing line, oriented so that it rises.
    struct Variant {
      std::span<const double> s;
      Rise rise;
      TagValue label;
    };
    const Variant variants[4] = {
        {left, rise_of(left, valid, k_h), kRight},
        {neg_right, rise_of(neg_right, valid, k_h), kLeft},
        {neg_left, rise_of(neg_left, valid, k_h), kLeft},
        {right, rise_of(right, valid, k_h), kRight},
    };

    std::optional<std::size_t> last_end;
    for (std::size_t k = 1; k < len; ++k) {
      if (!valid[k - 1] || !valid[k]) {
        ++skipped;
        continue;
      }
      int which = -1;
      if (left[k - 1] <= 0 && left[k] > 0) which = 0;
      else if (right[k - 1] >= 0 && right[k] < 0) which = 1;
      else if (left[k - 1] > 0 && left[k] <= 0) which = 2;
      else if (right[k - 1] < 0 && right[k] >= 0) which = 3;
      if (which < 0) continue;
      if (last_end && k <= *last_end) continue;

      const Variant& v = variants[which];
      const double width = left[k] - right[k];
      const double big = params.alpha1 * width;
      const double small = params.alpha2 * width;
      const std::size_t lo = last_end ? *last_end + 1 : 0;
      std::size_t start = lo;
      for (std::size_t t = k; t-- > lo;) {
        if (!valid[t]) continue;
        if (v.s[t] < -big || (v.rise.back[t] < thr && v.s[t] < -small)) {
          start = t;
          break;
        }
      }
      std::size_t end = len - 1;
      for (std::size_t t = k + 1; t < len; ++t) {
        if (!valid[t]) continue;
        if (v.s[t] > big || (v.rise.ahead[t] < thr && v.s[t] > small)) {
          end = t;
          break;
        }
      }
      std::fill(labels.begin() + a + start, labels.begin() + a + end + 1, v.label);
      last_end = end;
    }
  }
  // Observed-but-lineless pairs can hide a crossing.
  if (skipped > 0 && diag) {
    diag->warn("object " + std::to_string(obj.id) + ": " + std::to_string(skipped) +
               " crossing checks skipped (lane lines unavailable)");
  }
  out.intervals = intervals_from_labels(labels, obj.first_k);
  return out;
}

}  // namespace tagmine
