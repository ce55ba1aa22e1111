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

// Timings of the per-sample reference taggers against the production
// kernels, and of the production pipeline at one thread against many.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reference.hpp"
#include "tagmine/miner.hpp"
#include "tagmine/pipeline.hpp"
#include "tagmine/synth.hpp"

using namespace tagmine;

namespace {

using Clock = std::chrono::steady_clock;

// Best wall time of `reps` runs, seconds.
double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

void row(const char* what, double a, double b, const char* a_name, const char* b_name) {
  std::printf("%-28s %10s %9.4f s  %10s %9.4f s  x%6.2f\n", what, a_name, a, b_name, b, a / b);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tagmine benchmarks"};
  std::size_t samples = 360000;
  std::size_t slots = 10;
  std::size_t fixtures = 40;
  std::size_t fixture_len = 4000;
  int reps = 3;
  int threads = omp_get_max_threads();
  app.add_option("--samples", samples, "samples in the pipeline dataset");
  app.add_option("--slots", slots, "concurrent object slots");
  app.add_option("--fixtures", fixtures, "random fixtures for the reference comparison");
  app.add_option("--fixture-len", fixture_len, "maximum samples per fixture")->check(CLI::Range(50, 5000));
  app.add_option("--reps", reps, "repetitions; the best time is reported")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "threads for the parallel runs")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const Params params;
  bool ok = true;

  std::vector<Dataset> small;
  for (std::size_t s = 0; s < fixtures; ++s) small.push_back(synth::random_fixture(1000 + s, fixture_len, 3));
  std::printf("reference comparison: %zu fixtures of up to %zu samples\n", fixtures, fixture_len);
  omp_set_num_threads(1);
  std::vector<TaggedDataset> ref(small.size()), prod(small.size());
  const double t_ref = best_of(reps, [&] {
    for (std::size_t i = 0; i < small.size(); ++i) ref[i] = reference::oracle_tag(small[i], params);
  });
  const double t_prod = best_of(reps, [&] {
    for (std::size_t i = 0; i < small.size(); ++i) prod[i] = tag_dataset(small[i], params);
  });
  row("tag (reference vs kernel)", t_ref, t_prod, "reference", "kernel");
  for (std::size_t i = 0; i < small.size(); ++i) ok &= ref[i] == prod[i];

  const Dataset big = synth::gen_performance_dataset(samples, slots, 42);
  std::printf("pipeline: %zu samples, %zu objects, %d threads\n", big.timebase.n_samples, big.objects.size(),
              threads);
  TaggedDataset serial, parallel;
  omp_set_num_threads(1);
  const double t_tag1 = best_of(reps, [&] { serial = tag_dataset(big, params); });
  omp_set_num_threads(threads);
  const double t_tagn = best_of(reps, [&] { parallel = tag_dataset(big, params); });
  row("tag", t_tag1, t_tagn, "1 thread", "parallel");
  ok &= serial == parallel;

  const std::vector<ScenarioCategory> cats = {
      load_category(TAGMINE_CATEGORY_DIR "/cut_in.json"),
      load_category(TAGMINE_CATEGORY_DIR "/overtaking_before_lane_change.json")};
  std::vector<ScenarioInstance> mined1, minedn;
  omp_set_num_threads(1);
  const double t_mine1 = best_of(reps, [&] { mined1 = mine_all(serial, cats, params); });
  omp_set_num_threads(threads);
  const double t_minen = best_of(reps, [&] { minedn = mine_all(serial, cats, params); });
  row("mine", t_mine1, t_minen, "1 thread", "parallel");
  ok &= mined1 == minedn;
  std::printf("%zu instances mined\n", mined1.size());

  std::printf("results %s\n", ok ? "identical" : "DIFFER");
  return ok ? 0 : 1;
}
