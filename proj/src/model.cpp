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

#include "tagmine/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tagmine {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError("params: invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

constexpr std::array<std::string_view, kDimensionCount> kDimensionNames = {
    "LongitudinalActivity", "LateralActivity", "LongitudinalState",
    "LateralState",         "LeadVehicle",     "OnHighway",
};

constexpr std::array<std::string_view, 3> kLongActivity = {"Cruising", "Accelerating",
                                                           "Decelerating"};
constexpr std::array<std::string_view, 3> kLatActivity = {"FollowingLane", "ChangingLaneLeft",
                                                          "ChangingLaneRight"};
constexpr std::array<std::string_view, 2> kLongState = {"InFrontOfEgo", "BehindEgo"};
constexpr std::array<std::string_view, 4> kLatState = {"LeftOfEgo", "SameLaneAsEgo",
                                                       "RightOfEgo", "Unclear"};
constexpr std::array<std::string_view, 2> kLead = {"Leader", "NoLeader"};
constexpr std::array<std::string_view, 2> kHighway = {"Highway", "NoHighway"};

}  // namespace

void Params::validate() const {
  auto fail = [](const char* what) { throw DataError(std::string("params: ") + what); };
  if (!(ts > 0)) fail("ts must be > 0");
  if (k_h == 0) fail("k_h must be > 0");
  if (!(a_cruise > 0)) fail("a_cruise must be > 0");
  if (!(delta_v > 0)) fail("delta_v must be > 0");
  if (k_cruise == 0) fail("k_cruise must be > 0");
  if (!(delta_l > 0)) fail("delta_l must be > 0");
  if (!(v_lat > 0)) fail("v_lat must be > 0");
  if (!(alpha2 > 0 && alpha2 < alpha1 && alpha1 < 1)) fail("need 0 < alpha2 < alpha1 < 1");
  if (!(tau_h > 0)) fail("tau_h must be > 0");
  if (min_item_len == 0) fail("min_item_len must be > 0");
  if (!(eval_overlap > 0 && eval_overlap <= 1)) fail("eval_overlap must be in (0, 1]");
}

Params parse_params(std::string_view text, Params base) {
  Params p = base;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("params: line " + std::to_string(line_no) + ": expected key = value");
    }
    auto key = trim(line.substr(0, eq));
    auto val = trim(line.substr(eq + 1));
    if (key == "ts") p.ts = parse_number<double>(key, val);
    else if (key == "k_h") p.k_h = parse_number<std::size_t>(key, val);
    else if (key == "a_cruise") p.a_cruise = parse_number<double>(key, val);
    else if (key == "delta_v") p.delta_v = parse_number<double>(key, val);
    else if (key == "k_cruise") p.k_cruise = parse_number<std::size_t>(key, val);
    else if (key == "delta_l") p.delta_l = parse_number<double>(key, val);
    else if (key == "v_lat") p.v_lat = parse_number<double>(key, val);
    else if (key == "alpha1") p.alpha1 = parse_number<double>(key, val);
    else if (key == "alpha2") p.alpha2 = parse_number<double>(key, val);
    else if (key == "tau_h") p.tau_h = parse_number<double>(key, val);
    else if (key == "item_gap") p.item_gap = parse_number<std::size_t>(key, val);
    else if (key == "min_item_len") p.min_item_len = parse_number<std::size_t>(key, val);
    else if (key == "eval_overlap") p.eval_overlap = parse_number<double>(key, val);
    else throw DataError("params: unknown key '" + std::string(key) + "'");
  }
  p.validate();
  return p;
}

Params load_params(const std::string& path, Params base) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open params file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_params(ss.str(), base);
}

std::string format_params(const Params& p) {
  std::ostringstream os;
  os.precision(17);
  os << "ts = " << p.ts << "\n"
     << "k_h = " << p.k_h << "\n"
     << "a_cruise = " << p.a_cruise << "\n"
     << "delta_v = " << p.delta_v << "\n"
     << "k_cruise = " << p.k_cruise << "\n"
     << "delta_l = " << p.delta_l << "\n"
     << "v_lat = " << p.v_lat << "\n"
     << "alpha1 = " << p.alpha1 << "\n"
     << "alpha2 = " << p.alpha2 << "\n"
     << "tau_h = " << p.tau_h << "\n"
     << "item_gap = " << p.item_gap << "\n"
     << "min_item_len = " << p.min_item_len << "\n"
     << "eval_overlap = " << p.eval_overlap << "\n";
  return os.str();
}

std::string_view dimension_name(Dimension dim) {
  return kDimensionNames[static_cast<std::size_t>(dim)];
}

std::optional<Dimension> parse_dimension(std::string_view name) {
  for (std::size_t i = 0; i < kDimensionNames.size(); ++i) {
    if (kDimensionNames[i] == name) return static_cast<Dimension>(i);
  }
  return std::nullopt;
}

std::span<const std::string_view> value_names(Dimension dim) {
  switch (dim) {
    case Dimension::LongitudinalActivity: return kLongActivity;
    case Dimension::LateralActivity: return kLatActivity;
    case Dimension::LongitudinalState: return kLongState;
    case Dimension::LateralState: return kLatState;
    case Dimension::LeadVehicle: return kLead;
    case Dimension::OnHighway: return kHighway;
  }
  return {};
}

std::string_view value_name(Dimension dim, TagValue value) {
  auto names = value_names(dim);
  return value < names.size() ? names[value] : std::string_view{"?"};
}

std::optional<TagValue> parse_value(Dimension dim, std::string_view name) {
  auto names = value_names(dim);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<TagValue>(i);
  }
  if (dim == Dimension::LongitudinalActivity && name == "Braking") {
    return code(LongitudinalActivity::Decelerating);
  }
  return std::nullopt;
}

std::string Subject::to_string() const {
  switch (kind) {
    case Kind::Ego: return "ego";
    case Kind::Environment: return "environment";
    case Kind::Object: return "object:" + std::to_string(id);
  }
  return "?";
}

std::optional<Subject> Subject::parse(std::string_view text) {
  if (text == "ego") return ego();
  if (text == "environment") return environment();
  constexpr std::string_view prefix = "object:";
  if (text.starts_with(prefix)) {
    text.remove_prefix(prefix.size());
    std::int64_t id = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
    if (ec == std::errc{} && ptr == text.data() + text.size() && !text.empty()) return object(id);
  }
  return std::nullopt;
}

std::optional<TagValue> TagStream::at(std::size_t k) const {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), k,
                             [](std::size_t v, const Interval& iv) { return v < iv.start_k; });
  if (it == intervals.begin()) return std::nullopt;
  --it;
  if (k <= it->end_k) return it->value;
  return std::nullopt;
}

void coalesce(std::vector<Interval>& intervals) {
  std::size_t w = 0;
  for (std::size_t r = 0; r < intervals.size(); ++r) {
    if (w > 0 && intervals[w - 1].value == intervals[r].value &&
        intervals[w - 1].end_k + 1 == intervals[r].start_k) {
      intervals[w - 1].end_k = intervals[r].end_k;
    } else {
      intervals[w++] = intervals[r];
    }
  }
  intervals.resize(w);
}

std::vector<Interval> intervals_from_labels(std::span<const TagValue> labels, std::size_t offset) {
  std::vector<Interval> out;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == kNoTag) continue;
    if (!out.empty() && out.back().value == labels[k] && out.back().end_k + 1 == k + offset) {
      out.back().end_k = k + offset;
    } else {
      out.push_back({k + offset, k + offset, labels[k]});
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> true_runs(std::span<const std::uint8_t> mask) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t k = 0;
  while (k < mask.size()) {
    if (!mask[k]) {
      ++k;
      continue;
    }
    std::size_t start = k;
    while (k < mask.size() && mask[k]) ++k;
    runs.emplace_back(start, k - 1);
  }
  return runs;
}

void Dataset::validate() const {
  const std::size_t n = timebase.n_samples;
  if (!(timebase.sample_time_s > 0)) throw DataError("sample time must be > 0");
  if (ego.speed.size() != n || ego.dy_left.size() != n || ego.dy_right.size() != n ||
      ego.line_valid.size() != n) {
    throw DataError("ego series length differs from timebase");
  }
  if (ego.has_position() && (ego.lat.size() != n || ego.lon.size() != n)) {
    throw DataError("ego position length differs from timebase");
  }
  if (ego.has_road_class() && ego.road_class.size() != n) {
    throw DataError("ego road_class length differs from timebase");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(ego.speed[k]) || ego.speed[k] < 0) {
      throw DataError("ego speed invalid at k=" + std::to_string(k));
    }
    if (ego.line_valid[k] && !(ego.dy_left[k] > ego.dy_right[k])) {
      throw DataError("ego lane lines inconsistent at k=" + std::to_string(k));
    }
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& o = objects[i];
    if (i > 0 && objects[i - 1].id >= o.id) throw DataError("object ids not unique/sorted");
    const std::size_t m = o.dx.size();
    if (m == 0 || o.dy.size() != m || o.v_rel.size() != m || o.observed.size() != m) {
      throw DataError("object " + std::to_string(o.id) + ": inconsistent series");
    }
    if (o.first_k + m > n) throw DataError("object " + std::to_string(o.id) + " exceeds timebase");
    if (o.has_line_columns() && (o.dy_left_i.size() != m || o.dy_right_i.size() != m)) {
      throw DataError("object " + std::to_string(o.id) + ": inconsistent line columns");
    }
  }
}

const ObjectTrack* Dataset::find_object(std::int64_t id) const {
  auto it = std::lower_bound(objects.begin(), objects.end(), id,
                             [](const ObjectTrack& o, std::int64_t v) { return o.id < v; });
  return it != objects.end() && it->id == id ? &*it : nullptr;
}

}  // namespace tagmine
