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

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tagmine/category.hpp"
#include "tagmine/model.hpp"
#include "tagmine/pipeline.hpp"

namespace tagmine {

struct Segment {
  std::size_t item = 0;
  std::size_t start_k = 0;
  std::size_t end_k = 0;
  bool operator==(const Segment&) const = default;
};

/// A span of samples tiled by the items of a category, in order.
struct ItemMatch {
  std::size_t start_k = 0;
  std::size_t end_k = 0;
  std::vector<Segment> segments;
  bool operator==(const ItemMatch&) const = default;
};

struct ScenarioInstance {
  std::string category;
  std::vector<std::pair<std::string, Subject>> binding;  // role name -> subject
  std::vector<Segment> segments;
  std::size_t start_k = 0;
  std::size_t end_k = 0;

  /// Subject of the first vehicle role, if any.
  std::optional<Subject> primary_subject() const;
  bool operator==(const ScenarioInstance&) const = default;
};

/// Core matcher over precompiled item sets. A span [s, e] is valid when it
/// splits into one segment per item, in order, with item j true throughout
/// segment j, every segment at least min_item_len long, and each segment
/// starting 1 to item_gap + 1 samples after the previous one ends.
/// Returns the containment-maximal valid spans; overlapping ones are then
/// reduced greedily (longest first, earlier start on ties). Segments carry
/// the lexicographically earliest boundaries. Sorted by start.
std::vector<ItemMatch> match_items(std::span<const SampleSet> items, const Params& params);

/// All instances of `category` over every binding, sorted by
/// (binding, start_k). Bindings are searched in parallel.
std::vector<ScenarioInstance> mine(const TaggedDataset& tagged, const ScenarioCategory& category,
                                   const Params& params);

/// Mines several categories; results ordered by category, then as mine().
std::vector<ScenarioInstance> mine_all(const TaggedDataset& tagged,
                                       std::span<const ScenarioCategory> categories,
                                       const Params& params);

/// Search-free re-check of one instance directly against the tag streams:
/// segment order and coverage, per-sample item truth, segment lengths and
/// gaps. Never throws; malformed instances are simply invalid.
bool verify_instance(const ScenarioInstance& instance, const TaggedDataset& tagged,
                     const ScenarioCategory& category, const Params& params);

/// Line-delimited JSON, one instance per line:
///   {"category":"cut_in","binding":{"ego":"ego","other":"object:3","env":"environment"},
///    "segments":[{"item":1,"start_k":..,"end_k":..},..],
///    "start_k":..,"end_k":..,"start_t":..,"end_t":..}
/// Item numbers in the file are 1-based.
void write_instances(std::ostream& out, std::span<const ScenarioInstance> instances,
                     const Timebase& timebase);
std::vector<ScenarioInstance> read_instances(std::istream& in, const std::string& name = "instances");
void save_instances(std::span<const ScenarioInstance> instances, const Timebase& timebase,
                    const std::string& path);
std::vector<ScenarioInstance> load_instances(const std::string& path);

}  // namespace tagmine
