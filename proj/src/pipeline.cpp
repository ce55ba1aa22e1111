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

#include "tagmine/pipeline.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

#include "json.hpp"

#include "tagmine/tagger_lat.hpp"
#include "tagmine/tagger_long.hpp"

namespace tagmine {
namespace {

using ojson = nlohmann::ordered_json;

constexpr Dimension kObjectDims[] = {Dimension::LongitudinalActivity, Dimension::LateralActivity,
                                     Dimension::LongitudinalState, Dimension::LateralState,
                                     Dimension::LeadVehicle};

std::string_view kind_key(Subject::Kind kind) {
  switch (kind) {
    case Subject::Kind::Ego: return "ego";
    case Subject::Kind::Object: return "object";
    case Subject::Kind::Environment: return "environment";
  }
  return "";
}

}  // namespace

TaggedDataset::TaggedDataset(Timebase timebase, std::vector<std::int64_t> object_ids)
    : timebase_(timebase), object_ids_(std::move(object_ids)) {
  std::sort(object_ids_.begin(), object_ids_.end());
}

void TaggedDataset::add(TagStream stream) {
  declared_.insert({stream.subject.kind, stream.dimension});
  auto key = std::make_pair(stream.subject, stream.dimension);
  streams_.insert_or_assign(key, std::move(stream));
}

void TaggedDataset::declare(Subject::Kind kind, Dimension dim) { declared_.insert({kind, dim}); }

bool TaggedDataset::is_tagged(Subject::Kind kind, Dimension dim) const {
  return declared_.contains({kind, dim});
}

const TagStream* TaggedDataset::find(const Subject& subject, Dimension dim) const {
  auto it = streams_.find({subject, dim});
  return it == streams_.end() ? nullptr : &it->second;
}

std::vector<const TagStream*> TaggedDataset::streams() const {
  std::vector<const TagStream*> out;
  out.reserve(streams_.size());
  auto rank = [](Subject::Kind k) {
    return k == Subject::Kind::Ego ? 0 : k == Subject::Kind::Environment ? 1 : 2;
  };
  for (const auto& [key, s] : streams_) out.push_back(&s);
  std::stable_sort(out.begin(), out.end(), [&](const TagStream* a, const TagStream* b) {
    return std::tuple(rank(a->subject.kind), a->subject.id, a->dimension) <
           std::tuple(rank(b->subject.kind), b->subject.id, b->dimension);
  });
  return out;
}

bool TaggedDataset::operator==(const TaggedDataset& other) const {
  return timebase_.n_samples == other.timebase_.n_samples &&
         timebase_.sample_time_s == other.timebase_.sample_time_s &&
         timebase_.origin_time_s == other.timebase_.origin_time_s &&
         object_ids_ == other.object_ids_ && streams_ == other.streams_ &&
         declared_ == other.declared_;
}

TaggedDataset tag_dataset(const Dataset& data, const Params& params, const TaggingOptions& options,
                          Diagnostics* diag) {
  data.validate();
  std::vector<std::int64_t> ids;
  ids.reserve(data.objects.size());
  for (const auto& o : data.objects) ids.push_back(o.id);
  TaggedDataset out(data.timebase, ids);

  out.add(ego_longitudinal(data.ego, params));
  out.add(ego_lateral(data.ego, params, diag));

  const bool env_available =
      data.ego.has_road_class() || (data.ego.has_position() && options.roads != nullptr);
  if (env_available) {
    out.add(environment_tag(data.ego, options.roads));
  } else if (diag) {
    diag->warn("environment source missing; OnHighway not tagged");
  }

  for (Dimension d : kObjectDims) out.declare(Subject::Kind::Object, d);
  const auto count = static_cast<std::ptrdiff_t>(data.objects.size());
  std::vector<std::array<TagStream, 4>> per_object(data.objects.size());
  std::vector<Diagnostics> object_diag(data.objects.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto& obj = data.objects[i];
    per_object[i] = {object_longitudinal(data.ego.speed, obj, params),
                     object_lateral(data.ego, obj, params, &object_diag[i]),
                     longitudinal_state(obj), lateral_state(data.ego, obj)};
  }
  auto leaders = lead_vehicle(data, params);
  for (std::size_t i = 0; i < data.objects.size(); ++i) {
    for (auto& s : per_object[i]) out.add(std::move(s));
    out.add(std::move(leaders[i]));
    if (diag) diag->append(object_diag[i]);
  }
  return out;
}

void write_tags(std::ostream& out, const TaggedDataset& tagged) {
  ojson header;
  header["format"] = "tagmine-tags";
  header["version"] = 1;
  header["n_samples"] = tagged.timebase().n_samples;
  header["ts"] = tagged.timebase().sample_time_s;
  header["origin_t"] = tagged.timebase().origin_time_s;
  header["objects"] = tagged.object_ids();
  ojson dims = ojson::object();
  for (auto kind : {Subject::Kind::Ego, Subject::Kind::Object, Subject::Kind::Environment}) {
    ojson list = ojson::array();
    for (std::size_t d = 0; d < kDimensionCount; ++d) {
      const auto dim = static_cast<Dimension>(d);
      if (tagged.is_tagged(kind, dim)) list.push_back(dimension_name(dim));
    }
    dims[std::string(kind_key(kind))] = std::move(list);
  }
  header["dimensions"] = std::move(dims);
  out << header.dump() << '\n';

  for (const TagStream* s : tagged.streams()) {
    const std::string subject = s->subject.to_string();
    const std::string_view dim = dimension_name(s->dimension);
    for (const auto& iv : s->intervals) {
      ojson rec;
      rec["subject"] = subject;
      rec["dimension"] = dim;
      rec["value"] = value_name(s->dimension, iv.value);
      rec["start_k"] = iv.start_k;
      rec["end_k"] = iv.end_k;
      out << rec.dump() << '\n';
    }
  }
}

TaggedDataset read_tags(std::istream& in, const std::string& name) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> DataError {
    return DataError(name + ":" + std::to_string(line_no) + ": " + what);
  };
  auto parse_line = [&]() -> ojson {
    try {
      return ojson::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw fail(std::string("malformed JSON: ") + e.what());
    }
  };

  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    have_header = line.find_first_not_of(" \t\r") != std::string::npos;
  }
  if (!have_header) throw DataError(name + ": empty tag file");
  TaggedDataset out;
  std::map<std::pair<Subject, Dimension>, TagStream> building;
  try {
    const ojson header = parse_line();
    if (header.value("format", std::string{}) != "tagmine-tags") throw fail("not a tag file");
    if (header.value("version", 0) != 1) throw fail("unsupported tag file version");
    Timebase tb;
    tb.n_samples = header.at("n_samples").get<std::size_t>();
    tb.sample_time_s = header.at("ts").get<double>();
    tb.origin_time_s = header.value("origin_t", 0.0);
    out = TaggedDataset(tb, header.at("objects").get<std::vector<std::int64_t>>());
    for (auto kind : {Subject::Kind::Ego, Subject::Kind::Object, Subject::Kind::Environment}) {
      const auto& dims = header.at("dimensions");
      if (!dims.contains(kind_key(kind))) continue;
      for (const auto& d : dims.at(std::string(kind_key(kind)))) {
        auto dim = parse_dimension(d.get<std::string>());
        if (!dim) throw fail("unknown dimension " + d.get<std::string>());
        out.declare(kind, *dim);
      }
    }

    const auto& ids = out.object_ids();
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const ojson rec = parse_line();
      const auto subj_text = rec.at("subject").get<std::string>();
      auto subject = Subject::parse(subj_text);
      if (!subject) throw fail("bad subject " + subj_text);
      if (subject->kind == Subject::Kind::Object &&
          !std::binary_search(ids.begin(), ids.end(), subject->id)) {
        throw fail("subject " + subj_text + " not listed in header");
      }
      const auto dim_text = rec.at("dimension").get<std::string>();
      auto dim = parse_dimension(dim_text);
      if (!dim) throw fail("unknown dimension " + dim_text);
      if (!out.is_tagged(subject->kind, *dim)) {
        throw fail("dimension " + dim_text + " not declared for " + subj_text);
      }
      const auto value_text = rec.at("value").get<std::string>();
      auto value = parse_value(*dim, value_text);
      if (!value) throw fail("unknown value " + value_text + " for " + dim_text);
      Interval iv{rec.at("start_k").get<std::size_t>(), rec.at("end_k").get<std::size_t>(), *value};
      if (iv.start_k > iv.end_k || iv.end_k >= out.timebase().n_samples) {
        throw fail("interval out of range");
      }
      auto [it, inserted] = building.try_emplace({*subject, *dim}, TagStream{*subject, *dim, {}});
      auto& intervals = it->second.intervals;
      if (!intervals.empty() && intervals.back().end_k >= iv.start_k) {
        throw fail("intervals out of order for " + subj_text + " " + dim_text);
      }
      intervals.push_back(iv);
    }
  } catch (const nlohmann::json::exception& e) {
    throw fail(std::string("bad record: ") + e.what());
  }
  for (auto& [key, stream] : building) out.add(std::move(stream));
  return out;
}

void save_tags(const TaggedDataset& tagged, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_tags(out, tagged);
  if (!out) throw DataError("write failed: " + path);
}

TaggedDataset load_tags(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open tag file " + path);
  return read_tags(in, path);
}

}  // namespace tagmine
