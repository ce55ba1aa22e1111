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

#include "tagmine/eval.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "csv.hpp"

namespace tagmine {
namespace {

struct Candidate {
  double iou;
  std::size_t truth;
  std::size_t mined;
};

std::string percent(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%6.1f%%", 100.0 * v);
  return buf;
}

nlohmann::ordered_json score_json(const Score& s) {
  return {{"tp", s.tp},         {"fp", s.fp},         {"fn", s.fn},
          {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

}  // namespace

GroundTruth read_truth(std::istream& in, const std::string& name) {
  detail::CsvReader csv(in, name);
  const auto c_cat = csv.require("category");
  const auto c_subj = csv.require("subject_id");
  const auto c_start = csv.require("start_k");
  const auto c_end = csv.require("end_k");
  GroundTruth out;
  while (csv.next_row()) {
    TruthEntry e;
    e.category = std::string(csv.cell(c_cat));
    if (e.category.empty()) csv.fail("empty category");
    if (!csv.cell(c_subj).empty()) e.subject_id = csv.integer<std::int64_t>(c_subj, "subject_id");
    e.start_k = csv.integer<std::size_t>(c_start, "start_k");
    e.end_k = csv.integer<std::size_t>(c_end, "end_k");
    if (e.start_k > e.end_k) csv.fail("start_k > end_k");
    out.push_back(std::move(e));
  }
  return out;
}

GroundTruth load_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ground-truth file " + path);
  return read_truth(in, path);
}

void write_truth(std::ostream& out, std::span<const TruthEntry> truth) {
  out << "category,subject_id,start_k,end_k\n";
  for (const auto& e : truth) {
    out << e.category << ',';
    if (e.subject_id) out << *e.subject_id;
    out << ',' << e.start_k << ',' << e.end_k << '\n';
  }
}

void save_truth(std::span<const TruthEntry> truth, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  write_truth(out, truth);
}

Score score_counts(std::size_t tp, std::size_t fp, std::size_t fn, Diagnostics* diag) {
  Score s{tp, fp, fn, 0.0, 0.0, 0.0};
  const auto d = [](std::size_t v) { return static_cast<double>(v); };
  if (tp + fp > 0) s.precision = d(tp) / d(tp + fp);
  else if (diag) diag->warn("precision undefined (no detections); reported as 0");
  if (tp + fn > 0) s.recall = d(tp) / d(tp + fn);
  else if (diag) diag->warn("recall undefined (no ground truth); reported as 0");
  if (s.precision + s.recall > 0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

double temporal_iou(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
  const std::size_t lo = std::max(a0, b0), hi = std::min(a1, b1);
  if (lo > hi) return 0.0;
  const double inter = static_cast<double>(hi - lo + 1);
  const double uni = static_cast<double>(std::max(a1, b1) - std::min(a0, b0) + 1);
  return inter / uni;
}

Report match_and_score(std::span<const ScenarioInstance> mined, std::span<const TruthEntry> truth,
                       const Params& params, Diagnostics* diag) {
  std::vector<Candidate> pairs;
  std::vector<std::optional<Subject>> subjects(mined.size());
  for (std::size_t i = 0; i < mined.size(); ++i) subjects[i] = mined[i].primary_subject();
  for (std::size_t t = 0; t < truth.size(); ++t) {
    const auto& tr = truth[t];
    for (std::size_t i = 0; i < mined.size(); ++i) {
      const auto& m = mined[i];
      if (m.category != tr.category) continue;
      if (tr.subject_id && (!subjects[i] || subjects[i]->id != *tr.subject_id)) continue;
      const double iou = temporal_iou(tr.start_k, tr.end_k, m.start_k, m.end_k);
      if (iou >= params.eval_overlap) pairs.push_back({iou, t, i});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.iou, a.truth, a.mined) < std::tie(a.iou, b.truth, b.mined);
  });
  std::vector<bool> truth_used(truth.size(), false), mined_used(mined.size(), false);
  std::map<std::string, std::array<std::size_t, 3>> counts;  // tp, fp, fn
  for (const auto& c : pairs) {
    if (truth_used[c.truth] || mined_used[c.mined]) continue;
    truth_used[c.truth] = mined_used[c.mined] = true;
    ++counts[truth[c.truth].category][0];
  }
  for (std::size_t i = 0; i < mined.size(); ++i) {
    if (!mined_used[i]) ++counts[mined[i].category][1];
  }
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (!truth_used[t]) ++counts[truth[t].category][2];
  }

  Report report;
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& [cat, c] : counts) {
    Diagnostics local;
    report.per_category[cat] = score_counts(c[0], c[1], c[2], &local);
    if (diag) {
      for (const auto& w : local.warnings) diag->warn(cat + ": " + w);
    }
    tp += c[0];
    fp += c[1];
    fn += c[2];
  }
  report.overall = score_counts(tp, fp, fn, diag);
  return report;
}

std::string format_report_table(const Report& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-32s %6s %6s %6s %9s %9s %9s\n", "category", "TP", "FP", "FN",
                "recall", "precision", "F1");
  out << line;
  auto row = [&](const std::string& name, const Score& s) {
    std::snprintf(line, sizeof line, "%-32s %6zu %6zu %6zu %9s %9s %9s\n", name.c_str(), s.tp,
                  s.fp, s.fn, percent(s.recall).c_str(), percent(s.precision).c_str(),
                  percent(s.f1).c_str());
    out << line;
  };
  for (const auto& [cat, s] : report.per_category) row(cat, s);
  row("(all)", report.overall);
  return out.str();
}

std::string format_report_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["overall"] = score_json(report.overall);
  doc["categories"] = nlohmann::ordered_json::object();
  for (const auto& [cat, s] : report.per_category) doc["categories"][cat] = score_json(s);
  return doc.dump(2);
}

}  // namespace tagmine
