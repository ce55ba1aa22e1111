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

#pragma once

#include <cstdint>
#include <vector>

#include "tagmine/model.hpp"

namespace tagmine {

/// Distances of an object toward the ego lane lines over the object's span.
/// Uses the precomputed columns where present, otherwise the straight
/// parallel lane approximation (ego line distance minus object dy).
/// `valid` is 0 where the object is unobserved or the lines are unknown;
/// `left`/`right` are NaN there.
struct ObjectLines {
  std::vector<double> left;
  std::vector<double> right;
  std::vector<std::uint8_t> valid;
};

ObjectLines object_lines(const EgoTrack& ego, const ObjectTrack& obj);

/// Ego lane changes over the full timeline. A crossing is detected when both
/// line distances jump by more than delta_l in the same direction between
/// consecutive valid samples (gaps of invalid lines are bridged). Start and
/// end follow the lateral-rise rule with threshold v_lat*k_h*ts; a new
/// crossing is ignored while a change is running and a change never starts
/// before the previous one ended.
TagStream ego_lateral(const EgoTrack& ego, const Params& params, Diagnostics* diag = nullptr);

/// Lane changes of an object into or out of the ego lane, per observed run.
/// Crossing variants, checked in this order:
///   left line,  <=0 -> >0 : ChangingLaneRight (toward ego lane)
///   right line, >=0 -> <0 : ChangingLaneLeft  (toward ego lane)
///   left line,  >0 -> <=0 : ChangingLaneLeft  (leaving ego lane)
///   right line, <0 -> >=0 : ChangingLaneRight (leaving ego lane)
/// Start and end use the alpha1/alpha2 lane-width fractions together with the
/// lateral-rise threshold.
TagStream object_lateral(const EgoTrack& ego, const ObjectTrack& obj, const Params& params,
                         Diagnostics* diag = nullptr);

}  // namespace tagmine
