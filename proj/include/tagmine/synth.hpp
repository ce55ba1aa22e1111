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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tagmine/category.hpp"
#include "tagmine/eval.hpp"
#include "tagmine/model.hpp"
#include "tagmine/pipeline.hpp"

namespace tagmine::synth {

inline constexpr double kLaneWidth = 3.5;

// ---------------------------------------------------------------------------
// Speed profiles

struct ProfileSegment {
  double duration_s = 0.0;
  double accel = 0.0;  // 0 holds the speed

  static ProfileSegment hold(double d) { return {d, 0.0}; }
  static ProfileSegment ramp(double d, double a) { return {d, a}; }
};

struct SpeedProfile {
  std::vector<double> speed;
  /// Analytic longitudinal labeling. Ramp boundaries sit where the trailing
  /// and look-ahead rises cross a_cruise*k_h*ts, which can land one sample
  /// off when that crossing is an exact floating-point tie.
  TagStream expected;
};

/// Piecewise-linear speed: a segment of n = round(duration/ts) samples ends
/// at v_start + accel*n*ts. Expectations assume every ramp is surrounded by
/// holds of at least k_h samples and the profile starts with a hold.
SpeedProfile gen_speed_profile(std::span<const ProfileSegment> segments, double v0,
                               const Params& params);

/// The five-phase trapezoid: hold, +2 m/s^2, hold, -2 m/s^2, hold.
std::vector<ProfileSegment> trapezoid_profile();

// ---------------------------------------------------------------------------
// Scenes

struct Scene {
  Dataset data;
  GroundTruth truth;
};

/// Background vehicle on a constant-speed straight path in a fixed lane
/// (lane index relative to the ego's starting lane, +1 = left).
struct Distractor {
  int lane = -1;
  double dx0 = 30.0;
  double rel_speed = 0.0;
  std::int64_t object_id = 2;
};

struct CutInSpec {
  double t_cut_s = 10.0;     // lateral ramp centre
  double gap_m = 25.0;       // object ahead of ego
  double ego_speed = 25.0;   // m/s; the object matches it
  double lateral_speed = 1.0;
  double duration_s = 20.0;
  double ts = 0.01;
  bool from_right = false;
  /// Stops 1 m short of the ego lane line instead of entering the lane.
  bool stop_short = false;
  std::int64_t object_id = 1;
  std::optional<Distractor> distractor;
};

/// Ego centred in its lane at constant speed; one object a lane to the side
/// moves into the ego lane at lateral_speed around t_cut. Truth: the lateral
/// ramp span (empty when stop_short or when the headway never qualifies).
Scene gen_cutin_scene(const CutInSpec& spec, const Params& params = {});

struct OvertakingSpec {
  double ego_speed = 25.0;
  double rel_speed = 4.0;       // object minus ego
  double appear_s = 2.0;        // object first observed at dx = start_dx
  double start_dx = -40.0;
  double change_at_dx = 20.0;   // ego starts changing left once dx reaches this
  double lateral_speed = 1.0;
  double tail_s = 4.0;          // after the ego lane change completes
  double ts = 0.01;
  std::int64_t object_id = 1;
  std::optional<Distractor> distractor;
};

/// A faster vehicle in the left lane passes the ego, then the ego changes
/// into that lane behind it. Truth: [first observation, end of the ego ramp].
Scene gen_overtaking_scene(const OvertakingSpec& spec);

struct CorpusSpec {
  std::size_t cut_ins = 50;
  std::size_t overtakings = 50;
  std::uint64_t seed = 1;
  double ts = 0.01;
  double sigma_v = 0.0;     // additive noise on ego speed
  double sigma_line = 0.0;  // additive noise on ego lane-line distances
  bool distractors = true;  // adjacent-lane traffic that never interacts
};

/// Scenes of both kinds, shuffled and concatenated on one timeline with fresh
/// object ids; half of the cut-ins come from the right. Every scene carries a
/// road_class column of "motorway".
Scene gen_corpus(const CorpusSpec& spec);

/// Adds N(0, sigma) to ego speed (clamped at 0) and to both lane-line
/// distances of valid samples.
void add_noise(Dataset& data, double sigma_v, double sigma_line, std::uint64_t seed);

/// Long mixed-traffic log for throughput tests: `n_samples` samples with up to
/// `slots` concurrently tracked objects, each living 30 to 90 s.
Dataset gen_performance_dataset(std::size_t n_samples, std::size_t slots, std::uint64_t seed,
                                double ts = 0.01);

// ---------------------------------------------------------------------------
// Randomized fixtures

/// Random raw log of at most `max_samples` samples with at most `max_objects`
/// objects: piecewise speed, ego lane changes, invalid-line gaps, objects
/// with observation gaps that cross the ego lane lines, optional precomputed
/// object line columns and a road_class column.
Dataset random_fixture(std::uint64_t seed, std::size_t max_samples = 2000,
                       std::size_t max_objects = 3);

/// Random tag streams over n samples: ego and environment tile the timeline,
/// objects live on random sub-spans with gaps. Runs are short enough that
/// many item transitions occur.
TaggedDataset random_tagged(std::uint64_t seed, std::size_t n, std::size_t objects);

/// Small random category (1 to 3 items, one vehicle role, random And/Or/Not
/// expressions over the tagged dimensions).
ScenarioCategory random_category(std::uint64_t seed);

}  // namespace tagmine::synth
