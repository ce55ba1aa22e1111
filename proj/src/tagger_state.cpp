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

#include "tagmine/tagger_state.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "tagmine/tagger_lat.hpp"

namespace tagmine {
namespace {

constexpr double kEarthRadius = 6371008.8;

// Equirectangular projection around a reference latitude, meters.
struct LocalFrame {
  double lat0, lon0, cos_lat;
  LocalFrame(double lat, double lon)
      : lat0(lat), lon0(lon), cos_lat(std::cos(lat * std::numbers::pi / 180.0)) {}
  std::pair<double, double> project(double lat, double lon) const {
    const double d = std::numbers::pi / 180.0 * kEarthRadius;
    return {(lon - lon0) * d * cos_lat, (lat - lat0) * d};
  }
};

double point_segment_distance(std::pair<double, double> p, std::pair<double, double> a,
                              std::pair<double, double> b) {
  const double vx = b.first - a.first, vy = b.second - a.second;
  const double wx = p.first - a.first, wy = p.second - a.second;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? (wx * vx + wy * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = wx - t * vx, dy = wy - t * vy;
  return std::sqrt(dx * dx + dy * dy);
}

TagStream highway_stream(std::span<const std::string> classes) {
  std::vector<TagValue> labels(classes.size());
  for (std::size_t k = 0; k < classes.size(); ++k) {
    labels[k] = classes[k] == "motorway" ? code(OnHighway::Highway) : code(OnHighway::NoHighway);
  }
  return {Subject::environment(), Dimension::OnHighway, intervals_from_labels(labels)};
}

}  // namespace

TagStream longitudinal_state(const ObjectTrack& obj) {
  std::vector<TagValue> labels(obj.span(), kNoTag);
  for (std::size_t j = 0; j < obj.span(); ++j) {
    if (!obj.observed[j]) continue;
    labels[j] = obj.dx[j] > 0 ? code(LongitudinalState::InFrontOfEgo)
                              : code(LongitudinalState::BehindEgo);
  }
  return {Subject::object(obj.id), Dimension::LongitudinalState,
          intervals_from_labels(labels, obj.first_k)};
}

LateralState lateral_state_of(double left, double right) {
  if (right < 0) return left < 0 ? LateralState::LeftOfEgo : LateralState::SameLaneAsEgo;
  return left < 0 ? LateralState::Unclear : LateralState::RightOfEgo;
}

TagStream lateral_state(const EgoTrack& ego, const ObjectTrack& obj) {
  const auto lines = object_lines(ego, obj);
  std::vector<TagValue> labels(obj.span(), kNoTag);
  for (std::size_t j = 0; j < obj.span(); ++j) {
    if (lines.valid[j]) labels[j] = code(lateral_state_of(lines.left[j], lines.right[j]));
  }
  return {Subject::object(obj.id), Dimension::LateralState,
          intervals_from_labels(labels, obj.first_k)};
}

std::vector<TagStream> lead_vehicle(const Dataset& data, const Params& params) {
  const std::size_t n = data.timebase.n_samples;
  const auto& objs = data.objects;
  const auto count = static_cast<std::ptrdiff_t>(objs.size());
  const auto& speed = data.ego.speed;

  std::vector<ObjectLines> lines(objs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) lines[i] = object_lines(data.ego, objs[i]);

  // Closest qualifying object per sample. Objects are visited in id order and
  // only a strictly smaller gap replaces the incumbent.
  std::vector<std::int32_t> best(n, -1);
  constexpr std::size_t kChunk = 1 << 15;
  const auto chunks = static_cast<std::ptrdiff_t>((n + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::size_t c0 = static_cast<std::size_t>(c) * kChunk;
    const std::size_t c1 = std::min(n, c0 + kChunk);
    std::vector<double> best_dx(c1 - c0, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < objs.size(); ++i) {
      const auto& o = objs[i];
      const std::size_t lo = std::max(c0, o.first_k);
      const std::size_t hi = std::min(c1, o.first_k + o.span());
      for (std::size_t k = lo; k < hi; ++k) {
        const std::size_t j = k - o.first_k;
        if (!lines[i].valid[j]) continue;
        const double dx = o.dx[j];
        if (!(dx > 0) || !(lines[i].left[j] >= 0) || !(lines[i].right[j] < 0)) continue;
        if (!(speed[k] > 0) || !(dx / speed[k] < params.tau_h)) continue;
        if (dx < best_dx[k - c0]) {
          best_dx[k - c0] = dx;
          best[k] = static_cast<std::int32_t>(i);
        }
      }
    }
  }

  std::vector<TagStream> out(objs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto& o = objs[i];
    std::vector<TagValue> labels(o.span(), kNoTag);
    for (std::size_t j = 0; j < o.span(); ++j) {
      if (!o.observed[j]) continue;
      labels[j] = best[o.first_k + j] == i ? code(LeadVehicle::Leader) : code(LeadVehicle::NoLeader);
    }
    out[i] = {Subject::object(o.id), Dimension::LeadVehicle, intervals_from_labels(labels, o.first_k)};
  }
  return out;
}

RoadClassProvider::RoadClassProvider(std::vector<RoadSegment> roads, double match_radius_m)
    : roads_(std::move(roads)), radius_(match_radius_m) {
  if (!(radius_ > 0)) throw DataError("road match radius must be > 0");
}

RoadClassProvider RoadClassProvider::from_geojson(const std::string& text, double match_radius_m) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("road map: ") + e.what());
  }
  std::vector<RoadSegment> roads;
  auto add_line = [&](const nlohmann::json& coords, const std::string& cls) {
    RoadSegment seg;
    seg.road_class = cls;
    for (const auto& c : coords) {
      if (!c.is_array() || c.size() < 2) throw DataError("road map: bad coordinate");
      seg.points.emplace_back(c[1].get<double>(), c[0].get<double>());  // GeoJSON is lon,lat
    }
    if (!seg.points.empty()) roads.push_back(std::move(seg));
  };
  if (!doc.contains("features") || !doc["features"].is_array()) {
    throw DataError("road map: expected a FeatureCollection");
  }
  for (const auto& f : doc["features"]) {
    const auto& props = f.value("properties", nlohmann::json::object());
    std::string cls;
    if (props.contains("highway") && props["highway"].is_string()) cls = props["highway"];
    else if (props.contains("class") && props["class"].is_string()) cls = props["class"];
    const auto& geom = f.at("geometry");
    const std::string type = geom.at("type");
    if (type == "LineString") {
      add_line(geom.at("coordinates"), cls);
    } else if (type == "MultiLineString") {
      for (const auto& part : geom.at("coordinates")) add_line(part, cls);
    }
  }
  return RoadClassProvider(std::move(roads), match_radius_m);
}

RoadClassProvider RoadClassProvider::load(const std::string& path, double match_radius_m) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open road map " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_geojson(ss.str(), match_radius_m);
}

std::string RoadClassProvider::classify(double lat, double lon) const {
  const LocalFrame frame(lat, lon);
  const std::pair<double, double> origin{0.0, 0.0};
  double best = radius_;
  const RoadSegment* hit = nullptr;
  for (const auto& road : roads_) {
    const std::size_t segments = std::max<std::size_t>(road.points.size(), 2) - 1;
    for (std::size_t i = 0; i < segments; ++i) {
      const auto& pa = road.points[i];
      const auto& pb = road.points[std::min(i + 1, road.points.size() - 1)];
      const double d = point_segment_distance(origin, frame.project(pa.first, pa.second),
                                              frame.project(pb.first, pb.second));
      if (d <= best) {
        best = d;
        hit = &road;
      }
    }
  }
  return hit ? hit->road_class : std::string{};
}

TagStream environment_tag(const EgoTrack& ego, const RoadClassProvider* provider) {
  if (ego.has_road_class()) return highway_stream(ego.road_class);
  if (!ego.has_position() || provider == nullptr) throw DataError("environment source missing");
  std::vector<std::string> classes(ego.size());
  const auto n = static_cast<std::ptrdiff_t>(ego.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    if (std::isfinite(ego.lat[k]) && std::isfinite(ego.lon[k])) {
      classes[k] = provider->classify(ego.lat[k], ego.lon[k]);
    }
  }
  return highway_stream(classes);
}

}  // namespace tagmine
