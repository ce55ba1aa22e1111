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

#include "tagmine/miner.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "json.hpp"

namespace tagmine {
namespace {

using ojson = nlohmann::ordered_json;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Dense view of the item sets over one connected stretch of samples.
struct Component {
  std::size_t origin = 0;
  std::size_t len = 0;
  // Per item: local run bounds of the run containing x, kNone outside.
  std::vector<std::vector<std::size_t>> run_start;
  std::vector<std::vector<std::size_t>> run_end;
  std::vector<std::vector<Span>> runs;  // local coordinates
};

Component make_component(std::span<const SampleSet> items, Span range) {
  Component c;
  c.origin = range.start;
  c.len = range.end - range.start + 1;
  const std::size_t m = items.size();
  c.run_start.assign(m, std::vector<std::size_t>(c.len, kNone));
  c.run_end.assign(m, std::vector<std::size_t>(c.len, kNone));
  c.runs.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto it = std::lower_bound(items[j].begin(), items[j].end(), range.start,
                               [](const Span& s, std::size_t k) { return s.end < k; });
    for (; it != items[j].end() && it->start <= range.end; ++it) {
      const std::size_t a = std::max(it->start, range.start) - c.origin;
      const std::size_t b = std::min(it->end, range.end) - c.origin;
      c.runs[j].push_back({a, b});
      for (std::size_t x = a; x <= b; ++x) {
        c.run_start[j][x] = a;
        c.run_end[j][x] = b;
      }
    }
  }
  return c;
}

// S[e]: earliest start of a valid span ending at e, kNone if none.
std::vector<std::size_t> earliest_starts(const Component& c, std::size_t gap, std::size_t min_len) {
  const std::size_t m = c.runs.size();
  std::vector<std::size_t> cur(c.len, kNone);
  for (const auto& r : c.runs[0]) {
    for (std::size_t e = r.start + min_len - 1; e <= r.end; ++e) cur[e] = r.start;
  }
  for (std::size_t j = 1; j < m; ++j) {
    std::vector<std::size_t> next(c.len, kNone);
    for (const auto& r : c.runs[j]) {
      const std::size_t left = r.start >= gap + 1 ? r.start - 1 - gap : 0;
      std::size_t best = kNone;
      std::size_t ptr = left;
      for (std::size_t e = r.start + min_len - 1; e <= r.end; ++e) {
        for (; ptr + min_len <= e; ++ptr) best = std::min(best, cur[ptr]);
        next[e] = best;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

// Lexicographically earliest segment boundaries of the valid span [s, e]
// (local coordinates).
std::vector<Segment> earliest_partition(const Component& c, std::size_t s, std::size_t e,
                                        std::size_t gap, std::size_t min_len) {
  const std::size_t m = c.runs.size();
  const std::size_t w = e - s + 1;
  // q[j][t - s]: items j..m-1 tile [t, e] with item j starting at t.
  // r[j][x - s]: item j may end at x, given items j+1.. tile the rest.
  std::vector<std::vector<std::uint8_t>> q(m, std::vector<std::uint8_t>(w, 0));
  std::vector<std::vector<std::uint8_t>> r(m, std::vector<std::uint8_t>(w, 0));
  for (std::size_t t = s; t <= e; ++t) {
    q[m - 1][t - s] = c.run_end[m - 1][t] != kNone && c.run_end[m - 1][t] >= e && e - t + 1 >= min_len;
  }
  r[m - 1][w - 1] = 1;
  std::vector<std::size_t> prefix(w + 1);
  for (std::size_t j = m - 1; j-- > 0;) {
    prefix[0] = 0;
    for (std::size_t i = 0; i < w; ++i) prefix[i + 1] = prefix[i] + q[j + 1][i];
    for (std::size_t i = 0; i + 1 < w; ++i) {
      const std::size_t hi = std::min(i + 1 + gap, w - 1);
      r[j][i] = prefix[hi + 1] - prefix[i + 1] > 0;
    }
    prefix[0] = 0;
    for (std::size_t i = 0; i < w; ++i) prefix[i + 1] = prefix[i] + r[j][i];
    for (std::size_t t = s; t <= e; ++t) {
      const std::size_t end_run = c.run_end[j][t];
      if (end_run == kNone || t + min_len - 1 > e) continue;
      const std::size_t lo = t + min_len - 1 - s;
      const std::size_t hi = std::min(end_run, e) - s;
      if (lo <= hi) q[j][t - s] = prefix[hi + 1] - prefix[lo] > 0;
    }
  }

  std::vector<Segment> segs;
  std::size_t t = s;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    std::size_t x = t + min_len - 1;
    const std::size_t x_hi = std::min(c.run_end[j][t], e);
    while (x <= x_hi && !r[j][x - s]) ++x;
    segs.push_back({j, t, x});
    std::size_t y = x + 1;
    while (!q[j + 1][y - s]) ++y;
    t = y;
  }
  segs.push_back({m - 1, t, e});
  return segs;
}

bool overlaps(const Span& a, const Span& b) { return a.start <= b.end && b.start <= a.end; }

std::vector<Span> reduce_overlaps(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
    const std::size_t la = a.end - a.start, lb = b.end - b.start;
    return la != lb ? la > lb : a.start < b.start;
  });
  std::set<std::pair<std::size_t, std::size_t>> kept;
  for (const auto& s : spans) {
    auto it = kept.lower_bound({s.start, 0});
    if (it != kept.end() && overlaps(s, {it->first, it->second})) continue;
    if (it != kept.begin() && overlaps(s, {std::prev(it)->first, std::prev(it)->second})) continue;
    kept.insert({s.start, s.end});
  }
  std::vector<Span> out;
  for (const auto& [a, b] : kept) out.push_back({a, b});
  return out;
}

std::string subject_for_json(const Subject& s) { return s.to_string(); }

}  // namespace

std::optional<Subject> ScenarioInstance::primary_subject() const {
  for (const auto& [role, subject] : binding) {
    if (subject.kind == Subject::Kind::Object) return subject;
  }
  return std::nullopt;
}

std::vector<ItemMatch> match_items(std::span<const SampleSet> items, const Params& params) {
  std::vector<ItemMatch> out;
  if (items.empty()) return out;
  const std::size_t gap = params.item_gap;
  const std::size_t min_len = std::max<std::size_t>(params.min_item_len, 1);

  std::vector<Span> all;
  for (const auto& set : items) {
    if (set.empty()) return out;
    all.insert(all.end(), set.begin(), set.end());
  }
  std::sort(all.begin(), all.end(), [](const Span& a, const Span& b) { return a.start < b.start; });
  std::vector<Span> ranges;
  for (const auto& s : all) {
    if (!ranges.empty() && s.start <= ranges.back().end + 1 + gap) {
      ranges.back().end = std::max(ranges.back().end, s.end);
    } else {
      ranges.push_back(s);
    }
  }

  for (const auto& range : ranges) {
    const Component c = make_component(items, range);
    const auto starts = earliest_starts(c, gap, min_len);
    std::vector<Span> maximal;
    std::size_t later_min = kNone;
    for (std::size_t e = c.len; e-- > 0;) {
      if (starts[e] != kNone && starts[e] < later_min) maximal.push_back({starts[e], e});
      later_min = std::min(later_min, starts[e]);
    }
    for (const auto& span : reduce_overlaps(std::move(maximal))) {
      ItemMatch match{span.start + c.origin, span.end + c.origin,
                      earliest_partition(c, span.start, span.end, gap, min_len)};
      for (auto& seg : match.segments) {
        seg.start_k += c.origin;
        seg.end_k += c.origin;
      }
      out.push_back(std::move(match));
    }
  }
  return out;
}

std::vector<ScenarioInstance> mine(const TaggedDataset& tagged, const ScenarioCategory& category,
                                   const Params& params) {
  check_tagged(category, tagged);
  const auto bindings = enumerate_bindings(category, tagged);
  std::vector<std::vector<ScenarioInstance>> found(bindings.size());
  const auto count = static_cast<std::ptrdiff_t>(bindings.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t b = 0; b < count; ++b) {
    const auto& binding = bindings[b];
    const auto sets = compile(category, tagged, binding);
    for (auto& m : match_items(sets, params)) {
      ScenarioInstance inst;
      inst.category = category.name;
      for (std::size_t r = 0; r < category.roles.size(); ++r) {
        inst.binding.emplace_back(category.roles[r].name, binding[r]);
      }
      inst.segments = std::move(m.segments);
      inst.start_k = m.start_k;
      inst.end_k = m.end_k;
      found[b].push_back(std::move(inst));
    }
  }
  std::vector<ScenarioInstance> out;
  for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(out));
  return out;
}

std::vector<ScenarioInstance> mine_all(const TaggedDataset& tagged,
                                       std::span<const ScenarioCategory> categories,
                                       const Params& params) {
  std::vector<ScenarioInstance> out;
  for (const auto& cat : categories) {
    auto found = mine(tagged, cat, params);
    std::move(found.begin(), found.end(), std::back_inserter(out));
  }
  return out;
}

bool verify_instance(const ScenarioInstance& instance, const TaggedDataset& tagged,
                     const ScenarioCategory& category, const Params& params) {
  const std::size_t m = category.items.size();
  const std::size_t n = tagged.timebase().n_samples;
  const std::size_t min_len = std::max<std::size_t>(params.min_item_len, 1);
  if (instance.category != category.name) return false;
  if (instance.binding.size() != category.roles.size()) return false;
  for (std::size_t r = 0; r < category.roles.size(); ++r) {
    if (instance.binding[r].first != category.roles[r].name) return false;
    if (instance.binding[r].second.kind != subject_kind(category.roles[r].kind)) return false;
  }
  const auto& segs = instance.segments;
  if (segs.size() != m || m == 0) return false;
  if (segs.front().start_k != instance.start_k || segs.back().end_k != instance.end_k) return false;
  for (std::size_t j = 0; j < m; ++j) {
    const auto& seg = segs[j];
    if (seg.item != j || seg.start_k > seg.end_k || seg.end_k >= n) return false;
    if (seg.end_k - seg.start_k + 1 < min_len) return false;
    if (j > 0) {
      const std::size_t prev_end = segs[j - 1].end_k;
      if (seg.start_k <= prev_end || seg.start_k > prev_end + 1 + params.item_gap) return false;
    }
    for (const auto& cond : category.items[j].conditions) {
      const TagStream* stream = tagged.find(instance.binding[cond.role].second, cond.dimension);
      if (stream == nullptr) return false;
      for (std::size_t k = seg.start_k; k <= seg.end_k; ++k) {
        const auto v = stream->at(k);
        if (!v || !cond.expr.eval(*v)) return false;
      }
    }
  }
  return true;
}

void write_instances(std::ostream& out, std::span<const ScenarioInstance> instances,
                     const Timebase& timebase) {
  for (const auto& inst : instances) {
    ojson rec;
    rec["category"] = inst.category;
    ojson binding = ojson::object();
    for (const auto& [role, subject] : inst.binding) binding[role] = subject_for_json(subject);
    rec["binding"] = std::move(binding);
    ojson segs = ojson::array();
    for (const auto& s : inst.segments) {
      segs.push_back({{"item", s.item + 1}, {"start_k", s.start_k}, {"end_k", s.end_k}});
    }
    rec["segments"] = std::move(segs);
    rec["start_k"] = inst.start_k;
    rec["end_k"] = inst.end_k;
    rec["start_t"] = timebase.time_at(inst.start_k);
    rec["end_t"] = timebase.time_at(inst.end_k);
    out << rec.dump() << '\n';
  }
}

std::vector<ScenarioInstance> read_instances(std::istream& in, const std::string& name) {
  std::vector<ScenarioInstance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const ojson rec = ojson::parse(line);
      ScenarioInstance inst;
      inst.category = rec.at("category").get<std::string>();
      for (const auto& [role, subj] : rec.at("binding").items()) {
        auto s = Subject::parse(subj.get<std::string>());
        if (!s) throw DataError("bad subject " + subj.get<std::string>());
        inst.binding.emplace_back(role, *s);
      }
      for (const auto& s : rec.at("segments")) {
        const auto item = s.at("item").get<std::size_t>();
        if (item == 0) throw DataError("item numbers start at 1");
        inst.segments.push_back({item - 1, s.at("start_k").get<std::size_t>(),
                                 s.at("end_k").get<std::size_t>()});
      }
      inst.start_k = rec.at("start_k").get<std::size_t>();
      inst.end_k = rec.at("end_k").get<std::size_t>();
      if (inst.start_k > inst.end_k) throw DataError("start_k > end_k");
      out.push_back(std::move(inst));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(name + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void save_instances(std::span<const ScenarioInstance> instances, const Timebase& timebase,
                    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_instances(out, instances, timebase);
  if (!out) throw DataError("write failed: " + path);
}

std::vector<ScenarioInstance> load_instances(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open instance file " + path);
  return read_instances(in, path);
}

}  // namespace tagmine
