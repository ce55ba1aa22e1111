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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tagmine/miner.hpp"
#include "tagmine/model.hpp"

namespace tagmine {

struct TruthEntry {
  std::string category;
  std::optional<std::int64_t> subject_id;
  std::size_t start_k = 0;
  std::size_t end_k = 0;
  bool operator==(const TruthEntry&) const = default;
};
using GroundTruth = std::vector<TruthEntry>;

/// CSV with header `category,subject_id,start_k,end_k`; an empty subject_id
/// means "any subject".
GroundTruth read_truth(std::istream& in, const std::string& name = "truth");
GroundTruth load_truth(const std::string& path);
void write_truth(std::ostream& out, std::span<const TruthEntry> truth);
void save_truth(std::span<const TruthEntry> truth, const std::string& path);

struct Score {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Precision TP/(TP+FP), recall TP/(TP+FN) and their harmonic mean. An
/// empty denominator yields 0 and a warning.
Score score_counts(std::size_t tp, std::size_t fp, std::size_t fn, Diagnostics* diag = nullptr);

/// Temporal intersection over union of two closed sample ranges.
double temporal_iou(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1);

struct Report {
  Score overall;
  std::map<std::string, Score> per_category;
};

/// Greedy one-to-one matching by descending IoU. A pair is eligible when the
/// categories agree, the truth subject (if given) equals the instance's first
/// vehicle binding, and IoU >= params.eval_overlap.
Report match_and_score(std::span<const ScenarioInstance> mined, std::span<const TruthEntry> truth,
                       const Params& params, Diagnostics* diag = nullptr);

std::string format_report_table(const Report& report);
std::string format_report_json(const Report& report);

}  // namespace tagmine
