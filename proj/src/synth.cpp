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

#include "tagmine/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace tagmine::synth {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kHalfLane = kLaneWidth / 2.0;

std::size_t samples_for(double seconds, double ts) {
  return static_cast<std::size_t>(std::llround(seconds / ts));
}

// World-frame trajectories; converted to ego-relative quantities at the end.
struct WorldObject {
  std::int64_t id = 0;
  std::size_t first_k = 0;
  std::vector<double> x, y, v;
  std::vector<std::uint8_t> observed;
};

struct World {
  double ts = 0.01;
  std::vector<double> x, y, v;  // ego
  std::vector<WorldObject> objects;

  std::size_t size() const { return v.size(); }

  void drive_ego(std::size_t n, double speed) {
    x.assign(n, 0.0);
    y.assign(n, 0.0);
    v.assign(n, speed);
    for (std::size_t k = 1; k < n; ++k) x[k] = x[k - 1] + speed * ts;
  }

  // Object with constant speed and a fixed lateral position over [k0, k1].
  WorldObject& add_object(std::int64_t id, std::size_t k0, std::size_t k1, double x0, double y0,
                          double speed) {
    WorldObject o;
    o.id = id;
    o.first_k = k0;
    const std::size_t m = k1 - k0 + 1;
    o.x.resize(m);
    o.y.assign(m, y0);
    o.v.assign(m, speed);
    o.observed.assign(m, 1);
    o.x[0] = x0;
    for (std::size_t j = 1; j < m; ++j) o.x[j] = o.x[j - 1] + speed * ts;
    objects.push_back(std::move(o));
    return objects.back();
  }
};

void add_distractor(World& w, const std::optional<Distractor>& d) {
  if (!d) return;
  const std::size_t n = w.size();
  w.add_object(d->object_id, 0, n - 1, w.x[0] + d->dx0, d->lane * kLaneWidth, w.v[0] + d->rel_speed);
}

// Straight lateral ramp from y0 by `dist` (signed) at `speed`, starting at
// sample k0 of the series.
void lateral_ramp(std::vector<double>& y, std::size_t k0, double y0, double dist, double speed,
                  double ts) {
  const double total = std::abs(dist);
  const double sign = dist < 0 ? -1.0 : 1.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double travelled = k < k0 ? 0.0 : std::min(static_cast<double>(k - k0) * ts * speed, total);
    y[k] = y0 + sign * travelled;
  }
}

double left_line_of(double y) {
  return kLaneWidth * std::floor((y + kHalfLane) / kLaneWidth) + kHalfLane;
}

Dataset to_dataset(const World& w, const std::string& meta) {
  Dataset d;
  d.meta = meta;
  d.timebase = {w.ts, w.size(), 0.0};
  auto& ego = d.ego;
  const std::size_t n = w.size();
  ego.speed = w.v;
  ego.dy_left.resize(n);
  ego.dy_right.resize(n);
  ego.line_valid.assign(n, 1);
  ego.road_class.assign(n, "motorway");
  for (std::size_t k = 0; k < n; ++k) {
    ego.dy_left[k] = left_line_of(w.y[k]) - w.y[k];
    ego.dy_right[k] = ego.dy_left[k] - kLaneWidth;
  }
  for (const auto& o : w.objects) {
    ObjectTrack t;
    t.id = o.id;
    t.first_k = o.first_k;
    const std::size_t m = o.x.size();
    t.dx.resize(m);
    t.dy.resize(m);
    t.v_rel.resize(m);
    t.observed = o.observed;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = o.first_k + j;
      t.dx[j] = o.x[j] - w.x[k];
      t.dy[j] = o.y[j] - w.y[k];
      t.v_rel[j] = o.v[j] - w.v[k];
    }
    d.objects.push_back(std::move(t));
  }
  std::sort(d.objects.begin(), d.objects.end(),
            [](const ObjectTrack& a, const ObjectTrack& b) { return a.id < b.id; });
  return d;
}

void append_dataset(Dataset& into, Dataset&& part, std::int64_t& next_id,
                    GroundTruth& truth, GroundTruth part_truth) {
  const std::size_t offset = into.timebase.n_samples;
  auto cat = [](auto& a, const auto& b) { a.insert(a.end(), b.begin(), b.end()); };
  cat(into.ego.speed, part.ego.speed);
  cat(into.ego.dy_left, part.ego.dy_left);
  cat(into.ego.dy_right, part.ego.dy_right);
  cat(into.ego.line_valid, part.ego.line_valid);
  cat(into.ego.road_class, part.ego.road_class);
  into.timebase.n_samples += part.timebase.n_samples;
  std::map<std::int64_t, std::int64_t> renumber;
  for (auto& o : part.objects) {
    renumber[o.id] = next_id;
    o.id = next_id++;
    o.first_k += offset;
    into.objects.push_back(std::move(o));
  }
  for (auto& t : part_truth) {
    if (t.subject_id) t.subject_id = renumber.at(*t.subject_id);
    t.start_k += offset;
    t.end_k += offset;
    truth.push_back(std::move(t));
  }
}

// Monotone piecewise-constant-slope series with random breakpoints.
std::vector<double> random_piecewise(std::mt19937_64& rng, std::size_t n, double v0, double lo,
                                     double hi, double max_slope, double ts, double hold_prob) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> seg_len(5, 600);
  std::vector<double> out(n);
  double v = v0;
  std::size_t k = 0;
  while (k < n) {
    const std::size_t len = std::min(seg_len(rng), n - k);
    double slope = u(rng) < hold_prob ? 0.0 : (2.0 * u(rng) - 1.0) * max_slope;
    for (std::size_t j = 0; j < len; ++j, ++k) {
      v += slope * ts;
      if (v < lo || v > hi) {
        v = std::clamp(v, lo, hi);
        slope = 0.0;
      }
      out[k] = v;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

SpeedProfile gen_speed_profile(std::span<const ProfileSegment> segments, double v0,
                               const Params& params) {
  params.validate();
  if (segments.empty()) throw DataError("speed profile needs at least one segment");
  if (v0 < 0) throw DataError("negative initial speed");
  const double ts = params.ts;
  const std::size_t k_h = params.k_h;
  SpeedProfile out;
  struct Ramp {
    std::size_t corner, last;
    double accel;
  };
  std::vector<Ramp> ramps;
  double v = v0;
  for (const auto& seg : segments) {
    if (!(seg.duration_s > 0)) throw DataError("segment durations must be > 0");
    const std::size_t n = samples_for(seg.duration_s, ts);
    if (n == 0) throw DataError("segment shorter than one sample");
    const std::size_t k0 = out.speed.size();
    for (std::size_t i = 1; i <= n; ++i) {
      const double s = v + seg.accel * ts * static_cast<double>(i);
      if (s < -1e-9) throw DataError("speed profile reaches a negative speed");
      out.speed.push_back(std::max(s, 0.0));
    }
    v += seg.accel * ts * static_cast<double>(n);
    if (seg.accel != 0.0) {
      if (k0 == 0) throw DataError("speed profile must start with a hold");
      ramps.push_back({k0 - 1, k0 + n - 1, seg.accel});
    }
  }
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    const bool ramp_next = segments[i].accel == 0.0 && segments[i + 1].accel != 0.0;
    const bool ramp_prev = segments[i].accel != 0.0 && segments[i + 1].accel == 0.0;
    if (ramp_next || ramp_prev) {
      const auto& hold = ramp_next ? segments[i] : segments[i + 1];
      if (samples_for(hold.duration_s, ts) < k_h) {
        throw DataError("expectation needs holds of at least k_h samples around ramps");
      }
    }
    if (segments[i].accel != 0.0 && segments[i + 1].accel != 0.0) {
      throw DataError("expectation needs a hold between ramps");
    }
  }
  if (segments.back().accel != 0.0) throw DataError("speed profile must end with a hold");

  // Activity intervals: the trailing rise reaches the threshold c samples
  // after the ramp corner; the look-ahead rise falls below it c-1 samples
  // before the ramp ends.
  struct Act {
    std::size_t start, end;
    TagValue label;
  };
  std::vector<Act> acts;
  const double thr_over_slope = params.a_cruise * static_cast<double>(k_h);
  for (const auto& r : ramps) {
    const auto c = static_cast<std::size_t>(std::ceil(thr_over_slope / std::abs(r.accel)));
    if (c > k_h || r.last + 1 < c) continue;
    const std::size_t start = r.corner + c;
    const std::size_t end = r.last + 1 - c;
    if (end <= start) continue;
    const double dv = std::abs(out.speed[end] - out.speed[start]);
    if (!(dv > params.delta_v)) continue;
    acts.push_back({start, end,
                    r.accel > 0 ? code(LongitudinalActivity::Accelerating)
                                : code(LongitudinalActivity::Decelerating)});
  }

  const TagValue cruise = code(LongitudinalActivity::Cruising);
  std::vector<Act> tiles;
  std::size_t k = 0;
  for (const auto& a : acts) {
    if (a.start > k) tiles.push_back({k, a.start - 1, cruise});
    tiles.push_back(a);
    k = a.end + 1;
  }
  if (k < out.speed.size()) tiles.push_back({k, out.speed.size() - 1, cruise});

  // Short interior cruises, resolved one at a time from the left.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 1; i + 1 < tiles.size(); ++i) {
      auto& c = tiles[i];
      if (c.label != cruise || c.end - c.start + 1 >= params.k_cruise) continue;
      auto& prev = tiles[i - 1];
      auto& next = tiles[i + 1];
      if (prev.label == next.label) {
        prev.end = next.end;
        tiles.erase(tiles.begin() + static_cast<std::ptrdiff_t>(i), tiles.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      } else {
        const bool valley = prev.label == code(LongitudinalActivity::Decelerating);
        std::size_t m = c.start;
        for (std::size_t t = c.start; t <= c.end; ++t) {
          if (valley ? out.speed[t] < out.speed[m] : out.speed[t] > out.speed[m]) m = t;
        }
        prev.end = m - 1;
        next.start = m;
        tiles.erase(tiles.begin() + static_cast<std::ptrdiff_t>(i));
      }
      changed = true;
      break;
    }
  }
  out.expected.subject = Subject::ego();
  out.expected.dimension = Dimension::LongitudinalActivity;
  for (const auto& t : tiles) out.expected.intervals.push_back({t.start, t.end, t.label});
  coalesce(out.expected.intervals);
  return out;
}

std::vector<ProfileSegment> trapezoid_profile() {
  return {ProfileSegment::hold(10.0), ProfileSegment::ramp(5.0, 2.0), ProfileSegment::hold(10.0),
          ProfileSegment::ramp(5.0, -2.0), ProfileSegment::hold(10.0)};
}

// ---------------------------------------------------------------------------

Scene gen_cutin_scene(const CutInSpec& spec, const Params& params) {
  if (!(spec.ts > 0) || !(spec.duration_s > 0) || !(spec.lateral_speed > 0)) {
    throw DataError("cut-in scene: ts, duration and lateral speed must be > 0");
  }
  if (!(spec.ego_speed >= 0)) throw DataError("cut-in scene: negative ego speed");
  const double half_ramp = kHalfLane / spec.lateral_speed;
  if (spec.t_cut_s - half_ramp < 0 || spec.t_cut_s + half_ramp > spec.duration_s) {
    throw DataError("cut-in scene: lateral ramp does not fit inside the scene");
  }
  const double ts = spec.ts;
  const std::size_t n = samples_for(spec.duration_s, ts) + 1;
  World w;
  w.ts = ts;
  w.drive_ego(n, spec.ego_speed);
  const double side = spec.from_right ? -1.0 : 1.0;
  auto& obj = w.add_object(spec.object_id, 0, n - 1, spec.gap_m, side * kLaneWidth, spec.ego_speed);
  const std::size_t k0 = samples_for(spec.t_cut_s - half_ramp, ts);
  const double dist = spec.stop_short ? kLaneWidth - kHalfLane - 1.0 : kLaneWidth;
  lateral_ramp(obj.y, k0, side * kLaneWidth, -side * dist, spec.lateral_speed, ts);
  add_distractor(w, spec.distractor);

  Scene scene{to_dataset(w, "synthetic cut-in"), {}};
  const std::size_t k1 = k0 + samples_for(kLaneWidth / spec.lateral_speed, ts);
  const bool leads = spec.ego_speed > 0 && spec.gap_m > 0 && spec.gap_m / spec.ego_speed < params.tau_h;
  if (!spec.stop_short && leads) scene.truth.push_back({"cut_in", spec.object_id, k0, std::min(k1, n - 1)});
  return scene;
}

Scene gen_overtaking_scene(const OvertakingSpec& spec) {
  if (!(spec.ts > 0) || !(spec.rel_speed > 0) || !(spec.lateral_speed > 0)) {
    throw DataError("overtaking scene: ts, relative speed and lateral speed must be > 0");
  }
  if (!(spec.start_dx < 0) || !(spec.change_at_dx > 0)) {
    throw DataError("overtaking scene: the object must start behind and pass the ego");
  }
  const double ts = spec.ts;
  const std::size_t k_appear = samples_for(spec.appear_s, ts);
  const auto pass_samples = static_cast<std::size_t>(
      std::ceil((spec.change_at_dx - spec.start_dx) / spec.rel_speed / ts));
  const std::size_t k_change = k_appear + pass_samples;
  const std::size_t k_done = k_change + samples_for(kLaneWidth / spec.lateral_speed, ts);
  const std::size_t n = k_done + samples_for(spec.tail_s, ts) + 1;

  World w;
  w.ts = ts;
  w.drive_ego(n, spec.ego_speed);
  lateral_ramp(w.y, k_change, 0.0, kLaneWidth, spec.lateral_speed, ts);
  w.add_object(spec.object_id, k_appear, n - 1, w.x[k_appear] + spec.start_dx, kLaneWidth,
               spec.ego_speed + spec.rel_speed);
  add_distractor(w, spec.distractor);
  return {to_dataset(w, "synthetic overtaking"),
          {{"overtaking_before_lane_change", spec.object_id, k_appear, k_done}}};
}

Scene gen_corpus(const CorpusSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * u(rng); };

  std::vector<int> order;
  order.insert(order.end(), spec.cut_ins, 0);
  order.insert(order.end(), spec.overtakings, 1);
  std::shuffle(order.begin(), order.end(), rng);

  Scene out;
  out.data.timebase = {spec.ts, 0, 0.0};
  out.data.meta = "synthetic corpus";
  std::int64_t next_id = 1;
  std::size_t cut_in_index = 0;
  for (int kind : order) {
    Scene scene;
    if (kind == 0) {
      CutInSpec c;
      c.ts = spec.ts;
      c.duration_s = 20.0;
      c.t_cut_s = uniform(8.0, 12.0);
      c.gap_m = uniform(15.0, 40.0);
      c.from_right = (cut_in_index++ % 2) == 1;
      if (spec.distractors) {
        c.distractor = Distractor{c.from_right ? 1 : -1, uniform(-20.0, 60.0), uniform(-1.0, 1.0), 2};
      }
      scene = gen_cutin_scene(c);
    } else {
      OvertakingSpec o;
      o.ts = spec.ts;
      o.appear_s = uniform(1.0, 3.0);
      o.rel_speed = uniform(3.0, 5.0);
      o.start_dx = uniform(-45.0, -30.0);
      o.change_at_dx = uniform(15.0, 25.0);
      if (spec.distractors) {
        o.distractor = Distractor{-1, uniform(-20.0, 60.0), uniform(-1.0, 1.0), 2};
      }
      scene = gen_overtaking_scene(o);
    }
    append_dataset(out.data, std::move(scene.data), next_id, out.truth, std::move(scene.truth));
  }
  if (spec.sigma_v > 0 || spec.sigma_line > 0) {
    add_noise(out.data, spec.sigma_v, spec.sigma_line, spec.seed ^ 0x9E3779B97F4A7C15ULL);
  }
  return out;
}

void add_noise(Dataset& data, double sigma_v, double sigma_line, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nv(0.0, sigma_v > 0 ? sigma_v : 1.0);
  std::normal_distribution<double> nl(0.0, sigma_line > 0 ? sigma_line : 1.0);
  auto& ego = data.ego;
  for (std::size_t k = 0; k < ego.size(); ++k) {
    if (sigma_v > 0) ego.speed[k] = std::max(0.0, ego.speed[k] + nv(rng));
    if (sigma_line > 0 && ego.line_valid[k]) {
      ego.dy_left[k] += nl(rng);
      ego.dy_right[k] += nl(rng);
    }
  }
}

// ---------------------------------------------------------------------------

Dataset gen_performance_dataset(std::size_t n_samples, std::size_t slots, std::uint64_t seed,
                                double ts) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * u(rng); };

  World w;
  w.ts = ts;
  w.v = random_piecewise(rng, n_samples, 25.0, 15.0, 35.0, 1.5, ts, 0.6);
  w.x.resize(n_samples);
  w.y.assign(n_samples, 0.0);
  for (std::size_t k = 1; k < n_samples; ++k) w.x[k] = w.x[k - 1] + w.v[k] * ts;
  // Ego lane changes roughly once a minute between three lanes.
  {
    std::size_t k = samples_for(uniform(20.0, 60.0), ts);
    int lane = 0;
    while (k < n_samples) {
      const int dir = lane == 1 ? -1 : lane == -1 ? 1 : (u(rng) < 0.5 ? -1 : 1);
      const std::size_t len = samples_for(kLaneWidth / 1.0, ts);
      for (std::size_t j = 0; j < len && k + j < n_samples; ++j) {
        w.y[k + j] = lane * kLaneWidth + dir * static_cast<double>(j + 1) * ts;
      }
      lane += dir;
      for (std::size_t j = k + len; j < n_samples; ++j) w.y[j] = lane * kLaneWidth;
      k += len + samples_for(uniform(30.0, 90.0), ts);
    }
  }

  std::int64_t next_id = 1;
  for (std::size_t s = 0; s < slots; ++s) {
    std::size_t k = samples_for(uniform(0.0, 5.0), ts);
    while (k + 10 < n_samples) {
      const std::size_t life = samples_for(uniform(30.0, 90.0), ts);
      const std::size_t k1 = std::min(n_samples - 1, k + life);
      const std::size_t m = k1 - k + 1;
      WorldObject o;
      o.id = next_id++;
      o.first_k = k;
      o.v = random_piecewise(rng, m, w.v[k] + uniform(-3.0, 3.0), 5.0, 40.0, 1.0, ts, 0.7);
      o.x.resize(m);
      o.x[0] = w.x[k] + uniform(-60.0, 90.0);
      for (std::size_t j = 1; j < m; ++j) o.x[j] = o.x[j - 1] + o.v[j] * ts;
      int lane = static_cast<int>(std::floor(uniform(-1.0, 2.0)));
      o.y.assign(m, lane * kLaneWidth + uniform(-0.3, 0.3));
      // Occasional lane change of the object.
      if (u(rng) < 0.5 && m > 800) {
        const std::size_t at = static_cast<std::size_t>(uniform(100.0, static_cast<double>(m - 500)));
        const int dir = lane == 1 ? -1 : lane == -1 ? 1 : (u(rng) < 0.5 ? -1 : 1);
        std::vector<double> tail(o.y.begin() + static_cast<std::ptrdiff_t>(at), o.y.end());
        lateral_ramp(tail, 0, o.y[at], dir * kLaneWidth, uniform(0.6, 1.5), ts);
        std::copy(tail.begin(), tail.end(), o.y.begin() + static_cast<std::ptrdiff_t>(at));
      }
      o.observed.assign(m, 1);
      if (u(rng) < 0.3) {
        const std::size_t g0 = static_cast<std::size_t>(uniform(0.0, static_cast<double>(m - 1)));
        const std::size_t g1 = std::min(m - 1, g0 + samples_for(uniform(0.1, 2.0), ts));
        std::fill(o.observed.begin() + static_cast<std::ptrdiff_t>(g0),
                  o.observed.begin() + static_cast<std::ptrdiff_t>(g1) + 1, 0);
        o.observed.front() = 1;
      }
      w.objects.push_back(std::move(o));
      k = k1 + 1 + samples_for(uniform(0.0, 3.0), ts);
    }
  }
  auto data = to_dataset(w, "synthetic performance log");
  // Sparse missing lane lines.
  for (std::size_t k = 0; k < n_samples; k += samples_for(uniform(20.0, 120.0), ts)) {
    const std::size_t g = std::min(n_samples, k + samples_for(uniform(0.05, 0.5), ts));
    for (std::size_t j = k; j < g; ++j) {
      data.ego.line_valid[j] = 0;
      data.ego.dy_left[j] = kNaN;
      data.ego.dy_right[j] = kNaN;
    }
    if (g == k) ++k;
  }
  return data;
}

// ---------------------------------------------------------------------------

Dataset random_fixture(std::uint64_t seed, std::size_t max_samples, std::size_t max_objects) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * u(rng); };
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const double ts = 0.01;
  const std::size_t n = pick(std::min<std::size_t>(50, max_samples), max_samples);

  World w;
  w.ts = ts;
  const bool standstill = u(rng) < 0.1;
  w.v = random_piecewise(rng, n, standstill ? 0.0 : uniform(0.0, 30.0), 0.0, 40.0,
                         uniform(0.05, 4.0), ts, 0.4);
  if (standstill) {
    const std::size_t stop = pick(0, n - 1);
    std::fill(w.v.begin(), w.v.begin() + static_cast<std::ptrdiff_t>(stop), 0.0);
  }
  w.x.resize(n);
  for (std::size_t k = 1; k < n; ++k) w.x[k] = w.x[k - 1] + w.v[k] * ts;
  // Ego lateral: random drifts and lane changes.
  w.y.assign(n, uniform(-0.5, 0.5));
  {
    std::size_t k = pick(0, n / 2);
    double y = w.y[0];
    while (k < n) {
      const double speed = uniform(0.2, 3.0);
      const double dist = (u(rng) < 0.5 ? -1.0 : 1.0) * uniform(0.2, 4.5);
      std::vector<double> seg(n - k);
      lateral_ramp(seg, 0, y, dist, speed, ts);
      std::copy(seg.begin(), seg.end(), w.y.begin() + static_cast<std::ptrdiff_t>(k));
      y = seg.back();
      k += samples_for(std::abs(dist) / speed, ts) + pick(1, 600);
    }
  }

  const std::size_t n_obj = pick(0, max_objects);
  std::vector<std::int64_t> ids;
  while (ids.size() < n_obj) {
    auto id = static_cast<std::int64_t>(pick(0, 40)) - 10;
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  }
  for (std::size_t i = 0; i < n_obj; ++i) {
    const std::size_t k0 = pick(0, n - 1);
    const std::size_t k1 = pick(k0, n - 1);
    const std::size_t m = k1 - k0 + 1;
    WorldObject o;
    o.id = ids[i];
    o.first_k = k0;
    if (i > 0 && u(rng) < 0.2 && !w.objects.empty() && w.objects[0].first_k == k0 &&
        w.objects[0].x.size() == m) {
      // Twin of the first object: equal gaps exercise the leader tie-break.
      o = w.objects[0];
      o.id = ids[i];
    } else {
      o.v.resize(m);
      auto rel = random_piecewise(rng, m, uniform(-5.0, 5.0), -10.0, 10.0, uniform(0.05, 3.0), ts, 0.4);
      for (std::size_t j = 0; j < m; ++j) o.v[j] = w.v[k0 + j] + rel[j];
      o.x.resize(m);
      o.x[0] = w.x[k0] + uniform(-40.0, 80.0);
      for (std::size_t j = 1; j < m; ++j) o.x[j] = o.x[j - 1] + o.v[j] * ts;
      const double lane = std::floor(uniform(-1.0, 2.0)) * kLaneWidth;
      o.y.assign(m, lane + uniform(-0.5, 0.5));
      std::size_t j = pick(0, m - 1);
      double y = o.y[0];
      while (j < m) {
        const double speed = uniform(0.2, 2.5);
        const double dist = (u(rng) < 0.5 ? -1.0 : 1.0) * uniform(0.3, 4.5);
        std::vector<double> seg(m - j);
        lateral_ramp(seg, 0, y, dist, speed, ts);
        std::copy(seg.begin(), seg.end(), o.y.begin() + static_cast<std::ptrdiff_t>(j));
        y = seg.back();
        j += samples_for(std::abs(dist) / speed, ts) + pick(1, 500);
      }
      o.observed.assign(m, 1);
      for (std::size_t g = pick(0, 3); g > 0; --g) {
        const std::size_t a = pick(0, m - 1);
        const std::size_t b = std::min(m - 1, a + pick(0, 150));
        std::fill(o.observed.begin() + static_cast<std::ptrdiff_t>(a),
                  o.observed.begin() + static_cast<std::ptrdiff_t>(b) + 1, 0);
      }
      o.observed.front() = 1;
      o.observed.back() = 1;
    }
    w.objects.push_back(std::move(o));
  }

  Dataset d = to_dataset(w, "random fixture " + std::to_string(seed));
  // Road class changes.
  {
    std::size_t k = 0;
    bool motorway = u(rng) < 0.7;
    while (k < n) {
      const std::size_t len = pick(1, 800);
      for (std::size_t j = k; j < std::min(n, k + len); ++j) {
        d.ego.road_class[j] = motorway ? "motorway" : (u(rng) < 0.5 ? "primary" : "residential");
      }
      k += len;
      motorway = !motorway;
    }
  }
  // Invalid lane-line gaps, occasionally the whole log.
  if (u(rng) < 0.05) {
    std::fill(d.ego.line_valid.begin(), d.ego.line_valid.end(), 0);
  } else {
    for (std::size_t g = pick(0, 4); g > 0; --g) {
      const std::size_t a = pick(0, n - 1);
      const std::size_t b = std::min(n - 1, a + pick(0, 80));
      std::fill(d.ego.line_valid.begin() + static_cast<std::ptrdiff_t>(a),
                d.ego.line_valid.begin() + static_cast<std::ptrdiff_t>(b) + 1, 0);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!d.ego.line_valid[k]) d.ego.dy_left[k] = d.ego.dy_right[k] = kNaN;
  }
  // Precomputed object line columns on some objects, with holes.
  for (auto& o : d.objects) {
    if (u(rng) >= 0.25) continue;
    o.dy_left_i.assign(o.span(), kNaN);
    o.dy_right_i.assign(o.span(), kNaN);
    const double bias = uniform(-0.3, 0.3);
    for (std::size_t j = 0; j < o.span(); ++j) {
      if (!o.observed[j] || u(rng) < 0.05) continue;
      const double yo = w.y[o.first_k + j] + o.dy[j];
      o.dy_left_i[j] = left_line_of(w.y[o.first_k + j]) - yo + bias;
      o.dy_right_i[j] = o.dy_left_i[j] - kLaneWidth;
    }
  }
  for (auto& o : d.objects) {
    for (std::size_t j = 0; j < o.span(); ++j) {
      if (!o.observed[j]) o.dx[j] = o.dy[j] = o.v_rel[j] = kNaN;
    }
  }
  return d;
}

TaggedDataset random_tagged(std::uint64_t seed, std::size_t n, std::size_t objects) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::vector<std::int64_t> ids;
  for (std::size_t i = 0; i < objects; ++i) ids.push_back(static_cast<std::int64_t>(i * 3 + pick(0, 2)));
  TaggedDataset out({0.01, n, 0.0}, ids);
  const std::size_t max_run = pick(2, 40);

  auto random_stream = [&](Subject subject, Dimension dim, std::size_t a, std::size_t b,
                           bool gaps) {
    TagStream s{subject, dim, {}};
    const std::size_t values = value_names(dim).size();
    std::size_t k = a;
    while (k <= b) {
      const std::size_t len = pick(1, max_run);
      const std::size_t e = std::min(b, k + len - 1);
      if (!gaps || pick(0, 9) > 0) {
        s.intervals.push_back({k, e, static_cast<TagValue>(pick(0, values - 1))});
      }
      k = e + 1;
    }
    coalesce(s.intervals);
    return s;
  };

  for (auto dim : dimensions_for(Role::Kind::Ego)) {
    out.add(random_stream(Subject::ego(), dim, 0, n - 1, false));
  }
  out.add(random_stream(Subject::environment(), Dimension::OnHighway, 0, n - 1, false));
  for (auto dim : dimensions_for(Role::Kind::Vehicle)) out.declare(Subject::Kind::Object, dim);
  for (auto id : out.object_ids()) {
    const std::size_t a = pick(0, n - 1);
    const std::size_t b = pick(a, n - 1);
    for (auto dim : dimensions_for(Role::Kind::Vehicle)) {
      out.add(random_stream(Subject::object(id), dim, a, b, true));
    }
  }
  return out;
}

ScenarioCategory random_category(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  ScenarioCategory cat;
  cat.name = "random_" + std::to_string(seed);
  cat.roles = {{"ego", Role::Kind::Ego}, {"other", Role::Kind::Vehicle},
               {"env", Role::Kind::Environment}};

  auto expression = [&](auto&& self, Dimension dim, std::size_t depth) -> TagExpression {
    const std::size_t values = value_names(dim).size();
    const std::size_t choice = depth >= 2 ? 0 : pick(0, 5);
    if (choice <= 2) return TagExpression::literal(static_cast<TagValue>(pick(0, values - 1)));
    if (choice == 3) return TagExpression::negate(self(self, dim, depth + 1));
    std::vector<TagExpression> kids;
    for (std::size_t i = pick(1, 3); i > 0; --i) kids.push_back(self(self, dim, depth + 1));
    return choice == 4 ? TagExpression::any_of(std::move(kids)) : TagExpression::all_of(std::move(kids));
  };

  const std::size_t m = pick(1, 3);
  for (std::size_t j = 0; j < m; ++j) {
    Item item;
    // Every item constrains the vehicle role so bindings matter.
    const std::size_t conds = pick(1, 3);
    for (std::size_t c = 0; c < conds; ++c) {
      const std::size_t role = c == 0 ? 1 : pick(0, 2);
      const auto dims = dimensions_for(cat.roles[role].kind);
      const Dimension dim = dims[pick(0, dims.size() - 1)];
      item.conditions.push_back({role, dim, expression(expression, dim, 0)});
    }
    cat.items.push_back(std::move(item));
  }
  return cat;
}

}  // namespace tagmine::synth
