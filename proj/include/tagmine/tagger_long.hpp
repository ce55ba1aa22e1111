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
#include <span>

#include "tagmine/model.hpp"

namespace tagmine {

/// Longitudinal activities (Cruising / Accelerating / Decelerating) of one
/// speed series. Every maximal observed run is tagged independently and
/// starts cruising. An acceleration starts at k when no activity is running,
/// the speed rose by at least a_cruise*k_h*ts over the trailing window, no
/// lower speed follows within k_h samples, and the speed at the activity end
/// differs from v(k) by more than delta_v. The end is the first later sample
/// whose look-ahead rise drops below the threshold. Deceleration mirrors this.
/// Look-aheads are truncated at the end of the run.
///
/// `speed` and `observed` are local to [offset, offset + size); an empty
/// `observed` means every sample is observed.
TagStream detect_longitudinal(std::span<const double> speed, std::span<const std::uint8_t> observed,
                              const Params& params, Subject subject = Subject::ego(),
                              std::size_t offset = 0);

/// Removes interior cruising intervals shorter than k_cruise. Equal neighbours
/// merge; decelerate-then-accelerate places the boundary at the earliest speed
/// minimum inside the removed cruise, accelerate-then-decelerate at the
/// earliest maximum. The first and last interval of every run are kept.
/// Moved boundaries can leave an activity whose net speed change no longer
/// exceeds delta_v; such activities become cruising and merging repeats until
/// nothing changes.
/// `speed` is indexed like the stream (global k minus `offset`).
TagStream merge_short_cruising(const TagStream& stream, std::span<const double> speed,
                               const Params& params, std::size_t offset = 0);

/// Ego longitudinal activity: detection followed by short-cruise merging.
TagStream ego_longitudinal(const EgoTrack& ego, const Params& params);

/// Other-vehicle longitudinal activity on v_rel + v_ego, per observed run.
TagStream object_longitudinal(std::span<const double> ego_speed, const ObjectTrack& obj,
                              const Params& params);

}  // namespace tagmine
