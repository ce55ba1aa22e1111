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

#include "tagmine/tagger_long.hpp"

#include <algorithm>
#include <cmath>

#include "tagmine/window.hpp"

namespace tagmine {
namespace {

constexpr TagValue kCruise = code(LongitudinalActivity::Cruising);
constexpr TagValue kAccel = code(LongitudinalActivity::Accelerating);
constexpr TagValue kDecel = code(LongitudinalActivity::Decelerating);

// First index >= i at which the look-ahead rise (or fall) falls below the
// threshold. The last sample always qualifies since its look-ahead is empty.
std::vector<std::size_t> activity_end_index(std::span<const double> v,
                                            std::span<const double> lead_extreme, double thr,
                                            std::size_t k_h, bool rising) {
  const std::size_t n = v.size();
  std::vector<std::size_t> next(n);
  next[n - 1] = n - 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    const double ahead = v[std::min(i + k_h, n - 1)] - lead_extreme[i];
    const bool settled = rising ? ahead < thr : ahead > -thr;
    next[i] = settled ? i : next[i + 1];
  }
  return next;
}

// Labels one fully observed run, written into `labels` (local indices).
void detect_run(std::span<const double> v, const Params& p, std::span<TagValue> labels) {
  const std::size_t n = v.size();
  const std::size_t k_h = p.k_h;
  const double thr = p.cruise_rise();
  const auto tmin = trailing_min(v, k_h);
  const auto tmax = trailing_max(v, k_h);
  const auto lmin = leading_min(v, k_h);
  const auto lmax = leading_max(v, k_h);
  const auto acc_end = activity_end_index(v, lmin, thr, k_h, true);
  const auto dec_end = activity_end_index(v, lmax, thr, k_h, false);

  std::fill(labels.begin(), labels.end(), kCruise);
  std::size_t k = 0;
  while (k < n) {
    if (v[k] - tmin[k] >= thr && lmin[k] == v[k]) {
      const std::size_t end = k + 1 < n ? acc_end[k + 1] : k;
      if (std::abs(v[end] - v[k]) > p.delta_v) {
        std::fill(labels.begin() + k, labels.begin() + end + 1, kAccel);
        k = end + 1;
        continue;
      }
    }
    if (v[k] - tmax[k] <= -thr && lmax[k] == v[k]) {
      const std::size_t end = k + 1 < n ? dec_end[k + 1] : k;
      if (std::abs(v[end] - v[k]) > p.delta_v) {
        std::fill(labels.begin() + k, labels.begin() + end + 1, kDecel);
        k = end + 1;
        continue;
      }
    }
    ++k;
  }
}

std::size_t extreme_index(std::span<const double> speed, std::size_t from, std::size_t to,
                          bool lowest) {
  std::size_t best = from;
  for (std::size_t i = from + 1; i <= to; ++i) {
    if (lowest ? speed[i] < speed[best] : speed[i] > speed[best]) best = i;
  }
  return best;
}

// One pass over the coalesced intervals; interior short cruises are decided
// against the original neighbours.
void merge_pass(std::vector<Interval>& iv, std::span<const double> speed, const Params& params,
                std::size_t offset) {
  std::vector<std::uint8_t> removed(iv.size(), 0);
  std::size_t group_start = 0;
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (i > 0 && iv[i - 1].end_k + 1 != iv[i].start_k) group_start = i;
    const bool last_of_group = i + 1 == iv.size() || iv[i].end_k + 1 != iv[i + 1].start_k;
    if (i == group_start || last_of_group) continue;
    if (iv[i].value != kCruise || iv[i].length() >= params.k_cruise) continue;

    auto& prev = iv[i - 1];
    auto& next = iv[i + 1];
    removed[i] = 1;
    if (prev.value == next.value) {
      prev.end_k = iv[i].end_k;
    } else {
      const bool valley = prev.value == kDecel;
      const std::size_t m =
          offset + extreme_index(speed, iv[i].start_k - offset, iv[i].end_k - offset, valley);
      prev.end_k = m - 1;
      next.start_k = m;
    }
  }
  std::size_t w = 0;
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (!removed[i]) iv[w++] = iv[i];
  }
  iv.resize(w);
  coalesce(iv);
}

// Relabels activities without a net change beyond delta_v. True if any.
bool demote_weak(std::vector<Interval>& iv, std::span<const double> speed, const Params& params,
                 std::size_t offset) {
  bool any = false;
  for (auto& x : iv) {
    if (x.value == kCruise) continue;
    const double dv = speed[x.end_k - offset] - speed[x.start_k - offset];
    const bool strong = x.value == kAccel ? dv > params.delta_v : -dv > params.delta_v;
    if (!strong) {
      x.value = kCruise;
      any = true;
    }
  }
  if (any) coalesce(iv);
  return any;
}

}  // namespace

TagStream detect_longitudinal(std::span<const double> speed, std::span<const std::uint8_t> observed,
                              const Params& params, Subject subject, std::size_t offset) {
  if (!observed.empty() && observed.size() != speed.size()) {
    throw DataError("detect_longitudinal: speed/observed length mismatch");
  }
  TagStream out{subject, Dimension::LongitudinalActivity, {}};
  if (speed.empty()) return out;
  std::vector<TagValue> labels(speed.size(), kNoTag);
  if (observed.empty()) {
    detect_run(speed, params, labels);
  } else {
    for (auto [a, b] : true_runs(observed)) {
      detect_run(speed.subspan(a, b - a + 1), params,
                 std::span<TagValue>(labels).subspan(a, b - a + 1));
    }
  }
  out.intervals = intervals_from_labels(labels, offset);
  return out;
}

TagStream merge_short_cruising(const TagStream& stream, std::span<const double> speed,
                               const Params& params, std::size_t offset) {
  TagStream out = stream;
  auto& iv = out.intervals;
  coalesce(iv);
  do {
    merge_pass(iv, speed, params, offset);
  } while (demote_weak(iv, speed, params, offset));
  return out;
}

TagStream ego_longitudinal(const EgoTrack& ego, const Params& params) {
  auto raw = detect_longitudinal(ego.speed, {}, params, Subject::ego());
  return merge_short_cruising(raw, ego.speed, params);
}

TagStream object_longitudinal(std::span<const double> ego_speed, const ObjectTrack& obj,
                              const Params& params) {
  if (obj.first_k + obj.span() > ego_speed.size()) {
    throw DataError("object " + std::to_string(obj.id) + " exceeds the ego timeline");
  }
  std::vector<double> speed(obj.span());
  for (std::size_t j = 0; j < obj.span(); ++j) {
    speed[j] = obj.observed[j] ? obj.v_rel[j] + ego_speed[obj.first_k + j] : 0.0;
  }
  auto raw = detect_longitudinal(speed, obj.observed, params, Subject::object(obj.id), obj.first_k);
  return merge_short_cruising(raw, speed, params, obj.first_k);
}

}  // namespace tagmine
