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

// Acceptance checks, one PASS/FAIL line each. Exit status is the number of
// failing checks (capped at 1). `--quick` shrinks the randomized sweeps and
// the throughput dataset for development runs.

#include <omp.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "reference.hpp"
#include "tagmine/category.hpp"
#include "tagmine/eval.hpp"
#include "tagmine/miner.hpp"
#include "tagmine/pipeline.hpp"
#include "tagmine/synth.hpp"
#include "tagmine/tagger_long.hpp"
#include "tagmine/tagger_state.hpp"

#ifndef TAGMINE_CATEGORY_DIR
#define TAGMINE_CATEGORY_DIR "categories"
#endif

namespace {

using namespace tagmine;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool quick = false;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<ScenarioCategory> bundled() {
  return {load_category(TAGMINE_CATEGORY_DIR "/cut_in.json"),
          load_category(TAGMINE_CATEGORY_DIR "/overtaking_before_lane_change.json")};
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome metric_identities() {
  const Score a = score_counts(33, 3, 3);
  const Score b = score_counts(18, 0, 1);
  const double tol = 1e-12;
  const bool ok = std::abs(a.precision - 33.0 / 36.0) < tol && std::abs(a.recall - 33.0 / 36.0) < tol &&
                  std::abs(a.f1 - 33.0 / 36.0) < tol && std::abs(b.precision - 1.0) < tol &&
                  std::abs(b.recall - 18.0 / 19.0) < tol && std::abs(b.f1 - 36.0 / 37.0) < tol &&
                  std::lround(100 * a.f1) == 92 && std::lround(100 * b.recall) == 95 &&
                  std::lround(100 * b.f1) == 97;
  return {ok, fmt("cut in P=R=F1=%.4f; overtaking R=%.4f P=%.4f F1=%.4f", a.f1, b.recall,
                  b.precision, b.f1)};
}

Outcome trapezoid() {
  const Params p;
  const auto segs = synth::trapezoid_profile();
  const auto profile = synth::gen_speed_profile(segs, 20.0, p);
  EgoTrack ego;
  ego.speed = profile.speed;
  const TagStream got = ego_longitudinal(ego, p);
  std::string seq;
  for (const auto& iv : got.intervals) {
    seq += std::string(value_name(Dimension::LongitudinalActivity, iv.value)).substr(0, 1);
  }
  const auto oracle = reference::longitudinal(profile.speed,
                                              std::vector<std::uint8_t>(profile.speed.size(), 1), p);
  const TagStream expected_labels{Subject::ego(), Dimension::LongitudinalActivity,
                                  intervals_from_labels(oracle)};
  const bool ok = seq == "CACDC" && got == profile.expected && got == expected_labels;
  std::string spans;
  for (const auto& iv : got.intervals) spans += fmt(" [%zu,%zu]", iv.start_k, iv.end_k);
  return {ok, "sequence " + seq + spans};
}

Outcome oracle_equivalence(std::vector<std::string>& invariant_log, std::size_t& fixtures_checked) {
  const std::size_t count = quick ? 200 : 1000;
  const Params p;
  std::atomic<std::size_t> mismatched{0}, bad_fixtures{0};
  std::vector<std::string> first_bad;
  std::vector<std::vector<std::string>> violations(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    const auto seed = static_cast<std::uint64_t>(i) + 1;
    const Dataset data = synth::random_fixture(seed, 2000, 3);
    const TaggedDataset prod = tag_dataset(data, p);
    const TaggedDataset ref = reference::oracle_tag(data, p);
    const std::size_t m = reference::mismatched_samples(prod, ref);
    violations[i] = reference::invariant_violations(data, prod, p);
    if (m > 0) {
      mismatched += m;
      ++bad_fixtures;
#pragma omp critical
      if (first_bad.size() < 5) first_bad.push_back(std::to_string(seed));
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    for (const auto& v : violations[i]) invariant_log.push_back("fixture " + std::to_string(i + 1) + ": " + v);
  }
  fixtures_checked += count;
  std::string detail = fmt("%zu fixtures, %zu mismatched samples", count, mismatched.load());
  if (!first_bad.empty()) {
    detail += " (seeds";
    for (const auto& s : first_bad) detail += " " + s;
    detail += ")";
  }
  return {mismatched == 0, detail};
}

std::vector<std::vector<std::uint8_t>> dense_masks(const TaggedDataset& tagged,
                                                   const ScenarioCategory& cat,
                                                   const std::vector<Subject>& bound) {
  const std::size_t n = tagged.timebase().n_samples;
  std::vector<std::vector<std::uint8_t>> masks(cat.items.size(), std::vector<std::uint8_t>(n, 0));
  for (std::size_t j = 0; j < cat.items.size(); ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      bool ok = true;
      for (const auto& c : cat.items[j].conditions) {
        const auto* s = tagged.find(bound[c.role], c.dimension);
        const auto v = s ? s->at(k) : std::nullopt;
        if (!v || !c.expr.eval(*v)) ok = false;
      }
      masks[j][k] = ok;
    }
  }
  return masks;
}

struct MinerTally {
  std::size_t cases = 0, instances = 0, mismatches = 0, unverified = 0, extendable = 0;
};

void check_miner_case(const TaggedDataset& tagged, const ScenarioCategory& cat, const Params& p,
                      MinerTally& t) {
  const auto got = mine(tagged, cat, p);
  const auto want = reference::brute_mine(tagged, cat, p);
  ++t.cases;
  t.instances += got.size();
  if (got != want) ++t.mismatches;
  const std::size_t n = tagged.timebase().n_samples;
  for (const auto& inst : got) {
    if (!verify_instance(inst, tagged, cat, p)) ++t.unverified;
    std::vector<Subject> bound;
    for (const auto& b : inst.binding) bound.push_back(b.second);
    const auto masks = dense_masks(tagged, cat, bound);
    const bool grow_left = inst.start_k > 0 && reference::span_valid(masks, inst.start_k - 1, inst.end_k, p);
    const bool grow_right = inst.end_k + 1 < n && reference::span_valid(masks, inst.start_k, inst.end_k + 1, p);
    if (grow_left || grow_right) ++t.extendable;
  }
}

Outcome miner_soundness() {
  const std::size_t count = quick ? 100 : 400;
  const auto cats = bundled();
  MinerTally total;
  std::vector<MinerTally> tallies(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    const auto seed = static_cast<std::uint64_t>(i) + 1;
    Params p;
    p.item_gap = seed % 3 == 0 ? seed % 7 : 0;
    p.min_item_len = 1 + seed % 4;
    const std::size_t n = 50 + seed * 37 % 451;
    const auto tagged = synth::random_tagged(seed, n, 1 + seed % 3);
    for (std::uint64_t c = 0; c < 3; ++c) {
      check_miner_case(tagged, synth::random_category(seed * 3 + c), p, tallies[i]);
    }
    // Real tagger output over small raw fixtures and the bundled categories.
    const Dataset data = synth::random_fixture(seed * 7919, 500, 3);
    const auto real = tag_dataset(data, Params{});
    for (const auto& c : cats) check_miner_case(real, c, p, tallies[i]);
  }
  for (const auto& t : tallies) {
    total.cases += t.cases;
    total.instances += t.instances;
    total.mismatches += t.mismatches;
    total.unverified += t.unverified;
    total.extendable += t.extendable;
  }
  return {total.mismatches == 0 && total.unverified == 0 && total.extendable == 0 && total.instances > 0,
          fmt("%zu cases, %zu instances; %zu differ from brute force, %zu fail verification, %zu extendable",
              total.cases, total.instances, total.mismatches, total.unverified, total.extendable)};
}

struct CorpusResult {
  Report report;
  bool ok = false;
};

CorpusResult run_corpus(double sigma_v, double sigma_line, const Params& p) {
  synth::CorpusSpec spec;
  spec.sigma_v = sigma_v;
  spec.sigma_line = sigma_line;
  spec.seed = 7;
  const auto scene = synth::gen_corpus(spec);
  const auto tagged = tag_dataset(scene.data, p);
  const auto cats = bundled();
  const auto mined = mine_all(tagged, cats, p);
  CorpusResult r;
  r.report = match_and_score(mined, scene.truth, p);
  return r;
}

std::string score_line(const Report& r) {
  std::string s;
  for (const auto& [cat, sc] : r.per_category) {
    s += fmt("%s TP=%zu FP=%zu FN=%zu P=%.3f R=%.3f F1=%.3f; ", cat.c_str(), sc.tp, sc.fp, sc.fn,
             sc.precision, sc.recall, sc.f1);
  }
  return s;
}

Outcome planted_truth(std::string& noisy_defaults) {
  const Params clean_params;
  const auto clean = run_corpus(0.0, 0.0, clean_params);
  bool ok = clean.report.per_category.size() == 2;
  for (const auto& [cat, sc] : clean.report.per_category) {
    ok = ok && sc.tp == 50 && sc.precision == 1.0 && sc.recall == 1.0;
  }
  Params noisy_params;
  noisy_params.item_gap = 50;
  noisy_params.min_item_len = 50;
  const auto noisy = run_corpus(0.3, 0.05, noisy_params);
  bool noisy_ok = noisy.report.per_category.size() == 2;
  for (const auto& [cat, sc] : noisy.report.per_category) noisy_ok = noisy_ok && sc.f1 >= 0.9;
  const auto noisy_default = run_corpus(0.3, 0.05, clean_params);
  noisy_defaults = "noisy, default miner params (informational): " + score_line(noisy_default.report);
  return {ok && noisy_ok, "clean: " + score_line(clean.report) + "| noisy (item_gap=50, min_item_len=50): " +
                              score_line(noisy.report)};
}

Outcome invariants(const std::vector<std::string>& fixture_log, std::size_t fixtures) {
  std::vector<std::string> log = fixture_log;
  // Bundled scenes and the corpus.
  const Params p;
  std::vector<Dataset> scenes;
  scenes.push_back(synth::gen_cutin_scene({}).data);
  synth::CutInSpec right;
  right.from_right = true;
  right.distractor = synth::Distractor{};
  scenes.push_back(synth::gen_cutin_scene(right).data);
  scenes.push_back(synth::gen_overtaking_scene({}).data);
  synth::CorpusSpec cs;
  cs.cut_ins = cs.overtakings = 10;
  cs.sigma_v = 0.3;
  cs.sigma_line = 0.05;
  scenes.push_back(synth::gen_corpus(cs).data);
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    for (const auto& v : reference::invariant_violations(scenes[i], tag_dataset(scenes[i], p), p)) {
      log.push_back("scene " + std::to_string(i) + ": " + v);
    }
  }
  // Lateral state is total over sign quadrants, zeros included.
  const double probes[] = {-1.0, -0.0, 0.0, 1.0};
  std::size_t quadrant_errors = 0;
  for (double l : probes) {
    for (double r : probes) {
      const auto s = lateral_state_of(l, r);
      const auto want = r < 0 ? (l < 0 ? LateralState::LeftOfEgo : LateralState::SameLaneAsEgo)
                              : (l < 0 ? LateralState::Unclear : LateralState::RightOfEgo);
      if (s != want) ++quadrant_errors;
    }
  }
  std::string detail = fmt("%zu random fixtures + %zu scenes, %zu violations, %zu quadrant errors",
                           fixtures, scenes.size(), log.size(), quadrant_errors);
  for (std::size_t i = 0; i < log.size() && i < 3; ++i) detail += "; " + log[i];
  return {log.empty() && quadrant_errors == 0, detail};
}

Outcome performance() {
  const std::size_t n = quick ? 144'000 : 1'440'000;
  const Dataset data = synth::gen_performance_dataset(n, 10, 42);
  const Params p;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  auto t0 = Clock::now();
  const auto tagged = tag_dataset(data, p);
  const double tag_s = seconds_since(t0);
  const auto cats = bundled();
  t0 = Clock::now();
  std::size_t found = 0;
  for (const auto& c : cats) found += mine(tagged, c, p).size();
  const double mine_s = seconds_since(t0);
  omp_set_num_threads(saved);
  return {tag_s < 60.0 && mine_s < 10.0,
          fmt("%zu samples, %zu objects, single thread: tag %.2f s, mine %.2f s (%zu instances)", n,
              data.objects.size(), tag_s, mine_s, found)};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
  }
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  std::vector<std::string> fixture_log;
  std::size_t fixtures = 0;
  std::string noisy_defaults;
  report(1, "metric identities", metric_identities);
  report(2, "trapezoid profile labels", trapezoid);
  report(3, "oracle equivalence", [&] { return oracle_equivalence(fixture_log, fixtures); });
  report(4, "miner soundness and completeness", miner_soundness);
  report(5, "planted-truth corpus", [&] { return planted_truth(noisy_defaults); });
  if (!noisy_defaults.empty()) std::printf("       %s\n", noisy_defaults.c_str());
  report(6, "invariant suite", [&] { return invariants(fixture_log, fixtures); });
  report(7, "performance", performance);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
