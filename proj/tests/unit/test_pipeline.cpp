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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <omp.h>

#include <sstream>

#include "fixtures.hpp"
#include "reference.hpp"
#include "tagmine/pipeline.hpp"
#include "tagmine/synth.hpp"

using namespace tagmine;
using namespace tagmine::testing;

namespace {

std::string tags_text(const TaggedDataset& t) {
  std::ostringstream out;
  write_tags(out, t);
  return out.str();
}

std::string read_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_tags(in, "t.jsonl");
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

const std::string kHeader =
    R"({"format":"tagmine-tags","version":1,"n_samples":10,"ts":0.01,"objects":[1],)"
    R"("dimensions":{"ego":["LongitudinalActivity"],"object":["LeadVehicle"]}})"
    "\n";

}  // namespace

TEST_CASE("tagging matches the oracle on random fixtures") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Dataset d = synth::random_fixture(seed, 2000, 3);
    const auto tagged = tag_dataset(d, Params{});
    const auto oracle = reference::oracle_tag(d, Params{});
    REQUIRE(reference::mismatched_samples(tagged, oracle) == 0);
    REQUIRE(tagged == oracle);
    REQUIRE(reference::invariant_violations(d, tagged, Params{}).empty());
  }
}

TEST_CASE("tagging is deterministic across runs and thread counts") {
  const auto scene = synth::gen_corpus({.cut_ins = 6, .overtakings = 6, .seed = 3, .sigma_v = 0.2});
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto serial = tag_dataset(scene.data, Params{});
  omp_set_num_threads(std::max(4, saved));
  const auto parallel = tag_dataset(scene.data, Params{});
  const auto again = tag_dataset(scene.data, Params{});
  omp_set_num_threads(saved);
  CHECK(serial == parallel);
  CHECK(parallel == again);
  CHECK(tags_text(serial) == tags_text(parallel));
}

TEST_CASE("declared dimensions and streams") {
  Dataset d = straight_road(100);
  const auto tagged = tag_dataset(d, Params{});
  CHECK(tagged.object_ids().empty());
  CHECK(tagged.is_tagged(Subject::Kind::Object, Dimension::LeadVehicle));
  CHECK(tagged.is_tagged(Subject::Kind::Environment, Dimension::OnHighway));
  CHECK(tagged.find(Subject::ego(), Dimension::LateralActivity) != nullptr);
  CHECK(tagged.find(Subject::object(1), Dimension::LateralActivity) == nullptr);
  const auto streams = tagged.streams();
  REQUIRE(streams.size() == 3);
  CHECK(streams[0]->subject == Subject::ego());
  CHECK(streams[2]->subject == Subject::environment());
}

TEST_CASE("missing environment source is skipped with a warning") {
  Dataset d = straight_road(100);
  d.ego.road_class.clear();
  Diagnostics diag;
  const auto tagged = tag_dataset(d, Params{}, {}, &diag);
  CHECK_FALSE(tagged.is_tagged(Subject::Kind::Environment, Dimension::OnHighway));
  CHECK(tagged.find(Subject::environment(), Dimension::OnHighway) == nullptr);
  CHECK(diag.warnings.size() == 1);
}

TEST_CASE("tag files round trip") {
  for (std::uint64_t seed : {4u, 8u, 15u}) {
    const auto tagged = tag_dataset(synth::random_fixture(seed, 1500, 4), Params{});
    const std::string text = tags_text(tagged);
    std::istringstream in(text);
    const auto back = read_tags(in);
    CHECK(back == tagged);
    CHECK(tags_text(back) == text);
  }
}

TEST_CASE("tag file errors") {
  CHECK(read_error("").find("empty tag file") != std::string::npos);
  CHECK(read_error("{\"format\":\"other\"}\n").find("not a tag file") != std::string::npos);
  CHECK(read_error("{oops\n").find("t.jsonl:1") != std::string::npos);
  auto record = [](const std::string& body) { return kHeader + body + "\n"; };
  CHECK(read_error(record(R"({"subject":"car","dimension":"LeadVehicle","value":"Leader","start_k":0,"end_k":1})"))
            .find("bad subject") != std::string::npos);
  CHECK(read_error(record(R"({"subject":"object:2","dimension":"LeadVehicle","value":"Leader","start_k":0,"end_k":1})"))
            .find("not listed") != std::string::npos);
  CHECK(read_error(record(R"({"subject":"object:1","dimension":"LeadVehicle","value":"Cruising","start_k":0,"end_k":1})"))
            .find("unknown value") != std::string::npos);
  CHECK(read_error(record(R"({"subject":"ego","dimension":"LeadVehicle","value":"Leader","start_k":0,"end_k":1})"))
            .find("not declared") != std::string::npos);
  CHECK(read_error(record(R"({"subject":"object:1","dimension":"LeadVehicle","value":"Leader","start_k":5,"end_k":10})"))
            .find("out of range") != std::string::npos);
  CHECK(read_error(record(R"({"subject":"object:1","dimension":"LeadVehicle","value":"Leader","start_k":5,"end_k":6})"
                          "\n"
                          R"({"subject":"object:1","dimension":"LeadVehicle","value":"NoLeader","start_k":6,"end_k":7})"))
            .find("t.jsonl:3") != std::string::npos);
  CHECK(read_error(record(R"({"subject":"ego","dimension":"LongitudinalActivity"})")).find("bad record") !=
        std::string::npos);
  CHECK_THROWS_WITH_AS(load_tags("/nonexistent/tags.jsonl"), doctest::Contains("/nonexistent/tags.jsonl"),
                       DataError);
}
