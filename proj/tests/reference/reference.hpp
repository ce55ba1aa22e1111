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

// Serial brute-force reference implementations. Every window is recomputed
// from scratch at every sample and every search is exhaustive; nothing here
// shares code with the production kernels beyond the data types. Test and
// benchmark use only.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tagmine/category.hpp"
#include "tagmine/miner.hpp"
#include "tagmine/model.hpp"
#include "tagmine/pipeline.hpp"
#include "tagmine/tagger_state.hpp"

namespace tagmine::reference {

inline constexpr std::size_t kMaxOracleSamples = 5000;

/// Per-sample labels, kNoTag where untagged.
using Labels = std::vector<TagValue>;

Labels longitudinal(const std::vector<double>& speed, const std::vector<std::uint8_t>& observed,
                    const Params& params);
Labels ego_lateral(const EgoTrack& ego, const Params& params);
/// Object streams are indexed by global sample (size n_samples).
Labels object_lateral(const Dataset& data, const ObjectTrack& obj, const Params& params);

/// Every tag stream of the dataset. Throws DataError beyond
/// kMaxOracleSamples samples.
TaggedDataset oracle_tag(const Dataset& data, const Params& params,
                         const RoadClassProvider* roads = nullptr);

/// Samples at which two tagged datasets disagree, summed over every
/// (subject, dimension) pair present in either.
std::size_t mismatched_samples(const TaggedDataset& a, const TaggedDataset& b);

/// Exhaustive matcher over dense item masks: every valid span by forward
/// reachability from each start, containment-maximal spans, quadratic greedy
/// overlap reduction and a depth-first search for the earliest partition.
std::vector<ItemMatch> brute_match(const std::vector<std::vector<std::uint8_t>>& items,
                                   const Params& params);

/// True when [s, e] admits a valid tiling by the items.
bool span_valid(const std::vector<std::vector<std::uint8_t>>& items, std::size_t s, std::size_t e,
                const Params& params);

/// brute_match over every binding, in the same output order as mine().
std::vector<ScenarioInstance> brute_mine(const TaggedDataset& tagged,
                                         const ScenarioCategory& category, const Params& params);

/// Structural invariants of a tagging result, one message per violation:
/// tiling of ego and environment streams, object streams covering exactly
/// their observed (lateral state: line-valid) samples, at most one leader per
/// sample, the speed-change bound on every activity interval and no interior
/// cruising interval shorter than k_cruise.
std::vector<std::string> invariant_violations(const Dataset& data, const TaggedDataset& tagged,
                                              const Params& params);

}  // namespace tagmine::reference
