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

#include "tagmine/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>

#include "csv.hpp"

namespace tagmine {
namespace {

using detail::CsvReader;
using detail::kNaN;

struct ObjectRow {
  std::size_t k;
  double dx, dy, v_rel, dl, dr;
  std::size_t line;
};

void read_ego(CsvReader& csv, const Params& params, Dataset& data, Diagnostics* diag) {
  const auto c_k = csv.require("k");
  const auto c_t = csv.require("t");
  const auto c_v = csv.require("v");
  const auto c_l = csv.require("dy_left");
  const auto c_r = csv.require("dy_right");
  const auto c_lat = csv.column("lat");
  const auto c_lon = csv.column("lon");
  const auto c_road = csv.column("road_class");
  if (c_lat.has_value() != c_lon.has_value()) {
    throw DataError("ego file: lat and lon must be given together");
  }

  auto& ego = data.ego;
  std::vector<double> times;
  std::size_t inconsistent_lines = 0;
  while (csv.next_row()) {
    const auto k = csv.integer<std::size_t>(c_k, "sample index");
    if (k != ego.speed.size()) {
      if (!ego.speed.empty() && k < ego.speed.size()) csv.fail("non-monotone sample index");
      csv.fail("sample index gap: expected k=" + std::to_string(ego.speed.size()));
    }
    const double t = csv.required_number(c_t, "time");
    if (!times.empty() && !(t > times.back())) csv.fail("non-monotone time");
    times.push_back(t);
    const double v = csv.required_number(c_v, "speed");
    if (v < 0) csv.fail("negative speed");
    ego.speed.push_back(v);
    const double dl = csv.number(c_l);
    const double dr = csv.number(c_r);
    bool valid = std::isfinite(dl) && std::isfinite(dr);
    if (valid && !(dl > dr)) {
      valid = false;
      ++inconsistent_lines;
    }
    ego.dy_left.push_back(valid ? dl : kNaN);
    ego.dy_right.push_back(valid ? dr : kNaN);
    ego.line_valid.push_back(valid ? 1 : 0);
    if (c_lat) {
      ego.lat.push_back(csv.number(*c_lat));
      ego.lon.push_back(csv.number(*c_lon));
    }
    if (c_road) ego.road_class.emplace_back(csv.cell(*c_road));
  }
  if (ego.speed.empty()) throw DataError("ego file: no samples");
  if (inconsistent_lines > 0 && diag) {
    diag->warn("ego: " + std::to_string(inconsistent_lines) +
               " samples with dy_left <= dy_right marked invalid");
  }
  const std::size_t n = ego.speed.size();
  data.timebase.n_samples = n;
  data.timebase.sample_time_s = params.ts;
  data.timebase.origin_time_s = times.front();
  if (n >= 2) {
    const double mean_dt = (times.back() - times.front()) / static_cast<double>(n - 1);
    if (std::abs(mean_dt - params.ts) > 1e-9) {
      throw DataError("ego file: sample time " + std::to_string(mean_dt) +
                      " s does not match ts=" + std::to_string(params.ts) +
                      " (resampling is not supported)");
    }
  }
}

void read_objects(CsvReader& csv, Dataset& data) {
  const auto c_k = csv.require("k");
  const auto c_id = csv.require("id");
  const auto c_dx = csv.require("dx");
  const auto c_dy = csv.require("dy");
  const auto c_v = csv.require("v_rel");
  const auto c_dl = csv.column("dy_left_i");
  const auto c_dr = csv.column("dy_right_i");
  if (c_dl.has_value() != c_dr.has_value()) {
    throw DataError("objects file: dy_left_i and dy_right_i must be given together");
  }
  const std::size_t n = data.timebase.n_samples;
  std::map<std::int64_t, std::vector<ObjectRow>> rows;
  while (csv.next_row()) {
    ObjectRow row{};
    row.k = csv.integer<std::size_t>(c_k, "sample index");
    if (row.k >= n) csv.fail("sample index beyond ego timeline");
    const auto id = csv.integer<std::int64_t>(c_id, "object id");
    row.dx = csv.required_number(c_dx, "dx");
    row.dy = csv.required_number(c_dy, "dy");
    row.v_rel = csv.required_number(c_v, "v_rel");
    row.dl = c_dl ? csv.number(*c_dl) : kNaN;
    row.dr = c_dr ? csv.number(*c_dr) : kNaN;
    row.line = csv.line_no();
    rows[id].push_back(row);
  }
  for (auto& [id, list] : rows) {
    std::stable_sort(list.begin(), list.end(),
                     [](const ObjectRow& a, const ObjectRow& b) { return a.k < b.k; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i].k == list[i - 1].k) {
        throw DataError("objects file:" + std::to_string(list[i].line) +
                        ": duplicate row for k=" + std::to_string(list[i].k) +
                        " id=" + std::to_string(id));
      }
    }
    ObjectTrack o;
    o.id = id;
    o.first_k = list.front().k;
    const std::size_t span = list.back().k - o.first_k + 1;
    o.dx.assign(span, 0.0);
    o.dy.assign(span, 0.0);
    o.v_rel.assign(span, 0.0);
    o.observed.assign(span, 0);
    if (c_dl) {
      o.dy_left_i.assign(span, kNaN);
      o.dy_right_i.assign(span, kNaN);
    }
    for (const auto& r : list) {
      const std::size_t j = r.k - o.first_k;
      o.dx[j] = r.dx;
      o.dy[j] = r.dy;
      o.v_rel[j] = r.v_rel;
      o.observed[j] = 1;
      if (c_dl && std::isfinite(r.dl) && std::isfinite(r.dr)) {
        o.dy_left_i[j] = r.dl;
        o.dy_right_i[j] = r.dr;
      }
    }
    data.objects.push_back(std::move(o));
  }
}

void write_double(std::ostream& out, double v) {
  if (!std::isfinite(v)) return;
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, ptr - buf);
}

}  // namespace

Dataset read_dataset(std::istream& ego_csv, std::istream* objects_csv, const Params& params,
                     Diagnostics* diag, const std::string& ego_name,
                     const std::string& objects_name) {
  params.validate();
  Dataset data;
  {
    CsvReader csv(ego_csv, ego_name);
    read_ego(csv, params, data, diag);
  }
  if (objects_csv) {
    CsvReader csv(*objects_csv, objects_name);
    read_objects(csv, data);
  }
  data.meta = ego_name;
  data.validate();
  return data;
}

Dataset load_dataset(const std::string& ego_path, const std::string& objects_path,
                     const Params& params, Diagnostics* diag) {
  std::ifstream ego(ego_path);
  if (!ego) throw DataError("cannot open " + ego_path);
  if (objects_path.empty()) return read_dataset(ego, nullptr, params, diag, ego_path);
  std::ifstream objects(objects_path);
  if (!objects) throw DataError("cannot open " + objects_path);
  return read_dataset(ego, &objects, params, diag, ego_path, objects_path);
}

void write_ego_csv(std::ostream& out, const Dataset& data) {
  const auto& ego = data.ego;
  out << "k,t,v,dy_left,dy_right";
  if (ego.has_position()) out << ",lat,lon";
  if (ego.has_road_class()) out << ",road_class";
  out << '\n';
  for (std::size_t k = 0; k < ego.size(); ++k) {
    out << k << ',';
    write_double(out, data.timebase.time_at(k));
    out << ',';
    write_double(out, ego.speed[k]);
    out << ',';
    if (ego.line_valid[k]) write_double(out, ego.dy_left[k]);
    out << ',';
    if (ego.line_valid[k]) write_double(out, ego.dy_right[k]);
    if (ego.has_position()) {
      out << ',';
      write_double(out, ego.lat[k]);
      out << ',';
      write_double(out, ego.lon[k]);
    }
    if (ego.has_road_class()) out << ',' << ego.road_class[k];
    out << '\n';
  }
}

void write_objects_csv(std::ostream& out, const Dataset& data) {
  const bool lines = std::any_of(data.objects.begin(), data.objects.end(),
                                 [](const ObjectTrack& o) { return o.has_line_columns(); });
  out << "k,id,dx,dy,v_rel";
  if (lines) out << ",dy_left_i,dy_right_i";
  out << '\n';
  // Rows ordered by k then id, the order a logger would emit them in.
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (k, object index)
  for (std::size_t i = 0; i < data.objects.size(); ++i) {
    const auto& o = data.objects[i];
    for (std::size_t j = 0; j < o.span(); ++j) {
      if (o.observed[j]) order.emplace_back(o.first_k + j, i);
    }
  }
  std::sort(order.begin(), order.end());
  for (auto [k, i] : order) {
    const auto& o = data.objects[i];
    const std::size_t j = k - o.first_k;
    out << k << ',' << o.id << ',';
    write_double(out, o.dx[j]);
    out << ',';
    write_double(out, o.dy[j]);
    out << ',';
    write_double(out, o.v_rel[j]);
    if (lines) {
      out << ',';
      if (o.has_line_columns()) write_double(out, o.dy_left_i[j]);
      out << ',';
      if (o.has_line_columns()) write_double(out, o.dy_right_i[j]);
    }
    out << '\n';
  }
}

void save_dataset(const Dataset& data, const std::string& ego_path,
                  const std::string& objects_path) {
  std::ofstream ego(ego_path);
  if (!ego) throw DataError("cannot write " + ego_path);
  write_ego_csv(ego, data);
  std::ofstream objects(objects_path);
  if (!objects) throw DataError("cannot write " + objects_path);
  write_objects_csv(objects, data);
}

}  // namespace tagmine
