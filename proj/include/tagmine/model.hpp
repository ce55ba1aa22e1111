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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tagmine {

/// Raised for malformed or inconsistent input data (files, categories, tags).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-fatal findings collected while loading or tagging.
struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string message) { warnings.push_back(std::move(message)); }
  void append(const Diagnostics& other) {
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  }
};

struct Timebase {
  double sample_time_s = 0.01;
  std::size_t n_samples = 0;
  double origin_time_s = 0.0;

  double time_at(std::size_t k) const {
    return origin_time_s + static_cast<double>(k) * sample_time_s;
  }
};

/// Every threshold used by the taggers, the miner and the evaluator.
/// Defaults reproduce the case-study parameter table; tau_h, item_gap,
/// min_item_len and eval_overlap are project defaults.
struct Params {
  double ts = 0.01;
  std::size_t k_h = 100;
  double a_cruise = 0.1;
  double delta_v = 1.0;
  std::size_t k_cruise = 400;
  double delta_l = 1.0;
  double v_lat = 0.25;
  double alpha1 = 0.5;
  double alpha2 = 0.1;
  double tau_h = 3.0;
  std::size_t item_gap = 0;
  std::size_t min_item_len = 1;
  double eval_overlap = 0.3;

  /// Throws DataError when an invariant is violated.
  void validate() const;

  /// Speed rise over one window that separates cruising from (de)acceleration.
  double cruise_rise() const { return a_cruise * static_cast<double>(k_h) * ts; }
  /// Lane-line rise over one window that marks lateral motion.
  double lateral_rise() const { return v_lat * static_cast<double>(k_h) * ts; }
};

/// Parses `key = value` lines (`#` starts a comment) on top of `base`.
Params parse_params(std::string_view text, Params base = {});
Params load_params(const std::string& path, Params base = {});
std::string format_params(const Params& params);

// ---------------------------------------------------------------------------
// Tags

enum class Dimension : std::uint8_t {
  LongitudinalActivity,
  LateralActivity,
  LongitudinalState,
  LateralState,
  LeadVehicle,
  OnHighway,
};
inline constexpr std::size_t kDimensionCount = 6;

enum class LongitudinalActivity : std::uint8_t { Cruising, Accelerating, Decelerating };
enum class LateralActivity : std::uint8_t { FollowingLane, ChangingLaneLeft, ChangingLaneRight };
enum class LongitudinalState : std::uint8_t { InFrontOfEgo, BehindEgo };
enum class LateralState : std::uint8_t { LeftOfEgo, SameLaneAsEgo, RightOfEgo, Unclear };
enum class LeadVehicle : std::uint8_t { Leader, NoLeader };
enum class OnHighway : std::uint8_t { Highway, NoHighway };

using TagValue = std::uint8_t;
inline constexpr TagValue kNoTag = 0xFF;

template <class E>
constexpr TagValue code(E e) {
  return static_cast<TagValue>(e);
}

std::string_view dimension_name(Dimension dim);
std::optional<Dimension> parse_dimension(std::string_view name);
std::span<const std::string_view> value_names(Dimension dim);
std::string_view value_name(Dimension dim, TagValue value);
/// Accepts the canonical names plus "Braking" for Decelerating.
std::optional<TagValue> parse_value(Dimension dim, std::string_view name);

/// Who a tag stream describes.
struct Subject {
  enum class Kind : std::uint8_t { Ego, Object, Environment };
  Kind kind = Kind::Ego;
  std::int64_t id = 0;

  static Subject ego() { return {Kind::Ego, 0}; }
  static Subject object(std::int64_t id) { return {Kind::Object, id}; }
  static Subject environment() { return {Kind::Environment, 0}; }

  /// "ego", "environment" or "object:<id>".
  std::string to_string() const;
  static std::optional<Subject> parse(std::string_view text);

  auto operator<=>(const Subject&) const = default;
};

struct Interval {
  std::size_t start_k = 0;
  std::size_t end_k = 0;
  TagValue value = 0;

  std::size_t length() const { return end_k - start_k + 1; }
  bool operator==(const Interval&) const = default;
};

/// Labeled, sorted, non-overlapping intervals of one subject in one dimension.
struct TagStream {
  Subject subject;
  Dimension dimension = Dimension::LongitudinalActivity;
  std::vector<Interval> intervals;

  std::optional<TagValue> at(std::size_t k) const;
  bool operator==(const TagStream&) const = default;
};

/// Merges adjacent intervals that carry the same value.
void coalesce(std::vector<Interval>& intervals);

/// Converts a per-sample label series into intervals; kNoTag samples are gaps.
/// `offset` is added to every index.
std::vector<Interval> intervals_from_labels(std::span<const TagValue> labels,
                                            std::size_t offset = 0);

// ---------------------------------------------------------------------------
// Raw tracks

struct EgoTrack {
  std::vector<double> speed;
  std::vector<double> dy_left;
  std::vector<double> dy_right;
  std::vector<std::uint8_t> line_valid;
  std::vector<double> lat;  // empty when positions are absent
  std::vector<double> lon;
  std::vector<std::string> road_class;  // empty when absent

  std::size_t size() const { return speed.size(); }
  bool has_position() const { return !lat.empty(); }
  bool has_road_class() const { return !road_class.empty(); }
};

/// A tracked vehicle. Series cover only [first_k, last_k()]; the object is
/// unobserved everywhere outside that span and where `observed` is 0.
struct ObjectTrack {
  std::int64_t id = 0;
  std::size_t first_k = 0;
  std::vector<double> dx;
  std::vector<double> dy;
  std::vector<double> v_rel;
  std::vector<std::uint8_t> observed;
  // Optional precomputed distances toward the ego lane lines (NaN = absent).
  std::vector<double> dy_left_i;
  std::vector<double> dy_right_i;

  std::size_t span() const { return dx.size(); }
  std::size_t last_k() const { return first_k + dx.size() - 1; }
  bool has_line_columns() const { return !dy_left_i.empty(); }
  bool observed_at(std::size_t k) const {
    return k >= first_k && k - first_k < observed.size() && observed[k - first_k] != 0;
  }
};

struct Dataset {
  Timebase timebase;
  EgoTrack ego;
  std::vector<ObjectTrack> objects;  // sorted by id
  std::string meta;

  /// Throws DataError when tracks disagree with the timebase or ids repeat.
  void validate() const;
  const ObjectTrack* find_object(std::int64_t id) const;
};

/// Maximal runs [start, end] (local indices) where `mask` is non-zero.
std::vector<std::pair<std::size_t, std::size_t>> true_runs(std::span<const std::uint8_t> mask);

}  // namespace tagmine
