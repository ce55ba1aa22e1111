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

#include <span>
#include <string>
#include <vector>

#include "tagmine/model.hpp"

namespace tagmine {

/// InFrontOfEgo where dx > 0, BehindEgo where dx <= 0; observed samples only.
TagStream longitudinal_state(const ObjectTrack& obj);

/// Lateral state from the signs of the line distances:
///
///                   left < 0     left >= 0
///   right <  0      LeftOfEgo    SameLaneAsEgo
///   right >= 0      Unclear      RightOfEgo
LateralState lateral_state_of(double left, double right);

/// Per-sample lateral state; untagged where the distances are unknown.
TagStream lateral_state(const EgoTrack& ego, const ObjectTrack& obj);

/// Leader / NoLeader for every object (same order as dataset.objects). An
/// object leads at k when it is ahead, in the ego lane, within tau_h of
/// headway (dx / v < tau_h, never at standstill) and no other qualifying
/// object is closer. Equal gaps go to the lowest id.
std::vector<TagStream> lead_vehicle(const Dataset& data, const Params& params);

struct RoadSegment {
  std::vector<std::pair<double, double>> points;  // (lat, lon) in degrees
  std::string road_class;
};

/// Offline road classification: the nearest polyline within match_radius_m.
class RoadClassProvider {
 public:
  explicit RoadClassProvider(std::vector<RoadSegment> roads, double match_radius_m = 15.0);

  /// GeoJSON FeatureCollection of LineString/MultiLineString features; the
  /// class is read from the `highway` property, else from `class`.
  static RoadClassProvider from_geojson(const std::string& text, double match_radius_m = 15.0);
  static RoadClassProvider load(const std::string& path, double match_radius_m = 15.0);

  /// Empty string when no road lies within the match radius.
  std::string classify(double lat, double lon) const;

  double match_radius_m() const { return radius_; }
  std::size_t size() const { return roads_.size(); }

 private:
  std::vector<RoadSegment> roads_;
  double radius_;
};

/// Highway where the road class is "motorway", NoHighway elsewhere. Uses the
/// road_class column when present, else positions through `provider`.
/// Throws DataError("environment source missing") when neither is available.
TagStream environment_tag(const EgoTrack& ego, const RoadClassProvider* provider);

}  // namespace tagmine
