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
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tagmine/model.hpp"
#include "tagmine/tagger_state.hpp"

namespace tagmine {

/// All tag streams of one dataset, indexed by (subject, dimension).
class TaggedDataset {
 public:
  TaggedDataset() = default;
  TaggedDataset(Timebase timebase, std::vector<std::int64_t> object_ids);

  void add(TagStream stream);
  /// Declares a dimension as tagged for a subject kind even if no stream
  /// exists (e.g. no objects at all).
  void declare(Subject::Kind kind, Dimension dim);
  bool is_tagged(Subject::Kind kind, Dimension dim) const;

  /// nullptr when the subject carries no stream in that dimension.
  const TagStream* find(const Subject& subject, Dimension dim) const;

  const Timebase& timebase() const { return timebase_; }
  const std::vector<std::int64_t>& object_ids() const { return object_ids_; }
  /// Streams in canonical order: ego, environment, then objects by id;
  /// dimensions in enum order.
  std::vector<const TagStream*> streams() const;

  bool operator==(const TaggedDataset& other) const;

 private:
  Timebase timebase_;
  std::vector<std::int64_t> object_ids_;
  std::map<std::pair<Subject, Dimension>, TagStream> streams_;
  std::set<std::pair<Subject::Kind, Dimension>> declared_;
};

struct TaggingOptions {
  const RoadClassProvider* roads = nullptr;
};

/// Runs every tagger. Objects are tagged in parallel (OpenMP); the result
/// does not depend on the number of threads.
TaggedDataset tag_dataset(const Dataset& data, const Params& params,
                          const TaggingOptions& options = {}, Diagnostics* diag = nullptr);

// Tag-stream file: line-delimited JSON. The first line is a header
//   {"format":"tagmine-tags","version":1,"n_samples":N,"ts":..,"origin_t":..,
//    "objects":[ids],"dimensions":{"ego":[..],"object":[..],"environment":[..]}}
// followed by one record per interval
//   {"subject":"object:7","dimension":"LateralActivity","value":"FollowingLane",
//    "start_k":0,"end_k":99}
void write_tags(std::ostream& out, const TaggedDataset& tagged);
TaggedDataset read_tags(std::istream& in, const std::string& name = "tags");
void save_tags(const TaggedDataset& tagged, const std::string& path);
TaggedDataset load_tags(const std::string& path);

}  // namespace tagmine
