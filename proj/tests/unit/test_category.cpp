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

#include <random>
#include <set>

#include "fixtures.hpp"
#include "tagmine/category.hpp"
#include "tagmine/synth.hpp"

using namespace tagmine;

namespace {

const std::string kDir = TAGMINE_CATEGORY_DIR;

std::string parse_error(const std::string& text) {
  try {
    parse_category(text, "c.json");
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

std::string with_item(const std::string& item) {
  return R"({"name":"x","roles":[{"name":"ego","kind":"ego"},{"name":"car","kind":"vehicle"}],"items":[)" +
         item + "]}";
}

// 1000 samples: ego accelerates on [100,200], changes left on [150,180];
// object 4 is observed on [500,600] only.
TaggedDataset small_tags() {
  TaggedDataset t({0.01, 1000, 0.0}, {4});
  for (auto d : {Dimension::LongitudinalActivity, Dimension::LateralActivity}) {
    t.declare(Subject::Kind::Ego, d);
  }
  t.declare(Subject::Kind::Object, Dimension::LeadVehicle);
  const auto C = code(LongitudinalActivity::Cruising);
  const auto A = code(LongitudinalActivity::Accelerating);
  t.add({Subject::ego(), Dimension::LongitudinalActivity, {{0, 99, C}, {100, 200, A}, {201, 999, C}}});
  const auto F = code(LateralActivity::FollowingLane);
  const auto L = code(LateralActivity::ChangingLaneLeft);
  t.add({Subject::ego(), Dimension::LateralActivity, {{0, 149, F}, {150, 180, L}, {181, 999, F}}});
  t.add({Subject::object(4), Dimension::LeadVehicle,
         {{500, 549, code(LeadVehicle::Leader)}, {550, 600, code(LeadVehicle::NoLeader)}}});
  return t;
}

std::vector<std::uint8_t> dense(const TaggedDataset& t, const Subject& s, Dimension dim,
                                const TagExpression& e) {
  const std::size_t n = t.timebase().n_samples;
  std::vector<std::uint8_t> out(n, 0);
  const TagStream* stream = t.find(s, dim);
  for (std::size_t k = 0; k < n && stream; ++k) {
    const auto v = stream->at(k);
    out[k] = v && e.eval(*v);
  }
  return out;
}

TagExpression random_expr(std::mt19937_64& rng, Dimension dim, int depth) {
  const auto names = value_names(dim);
  const int pick = depth >= 3 ? 0 : static_cast<int>(rng() % 4);
  if (pick == 0) return TagExpression::literal(*parse_value(dim, names[rng() % names.size()]));
  if (pick == 3) return TagExpression::negate(random_expr(rng, dim, depth + 1));
  std::vector<TagExpression> kids;
  for (std::size_t i = 0, m = 1 + rng() % 3; i < m; ++i) kids.push_back(random_expr(rng, dim, depth + 1));
  return pick == 1 ? TagExpression::all_of(std::move(kids)) : TagExpression::any_of(std::move(kids));
}

}  // namespace

TEST_CASE("bundled categories") {
  const auto cut_in = load_category(kDir + "/cut_in.json");
  CHECK(cut_in.name == "cut_in");
  REQUIRE(cut_in.roles.size() == 3);
  CHECK(cut_in.vehicle_roles() == std::vector<std::size_t>{1});
  REQUIRE(cut_in.items.size() == 2);
  for (const auto& item : cut_in.items) CHECK(item.conditions.size() == 4);

  const auto overtaking = load_category(kDir + "/overtaking_before_lane_change.json");
  CHECK(overtaking.items.size() == 4);
  CHECK(overtaking.role_index("ego").has_value());
  CHECK_FALSE(overtaking.role_index("pedestrian").has_value());

  // Formatting is a fixpoint after one parse.
  const std::string text = format_category(cut_in);
  CHECK(format_category(parse_category(text)) == text);
}

TEST_CASE("category errors") {
  const std::string flying = parse_error(with_item(R"({"car":{"LateralActivity":"Flying"}})"));
  CHECK(flying.find("c.json") != std::string::npos);
  CHECK(flying.find("LateralActivity=Flying") != std::string::npos);
  for (const char* v : {"FollowingLane", "ChangingLaneLeft", "ChangingLaneRight"}) {
    CHECK(flying.find(v) != std::string::npos);
  }
  CHECK(parse_error("{").find("malformed JSON") != std::string::npos);
  CHECK(parse_error("[]").find("top level") != std::string::npos);
  CHECK(parse_error(R"({"roles":[],"items":[]})").find("'name'") != std::string::npos);
  CHECK(parse_error(R"({"name":"x","roles":[{"name":"a","kind":"tree"}],"items":[]})").find("unknown kind") !=
        std::string::npos);
  CHECK(parse_error(R"({"name":"x","roles":[{"name":"a","kind":"ego"},{"name":"b","kind":"ego"}],"items":[{}]})")
            .find("more than one") != std::string::npos);
  CHECK(parse_error(with_item("")).find("no items") != std::string::npos);
  CHECK(parse_error(with_item("{}")).find("no conditions") != std::string::npos);
  CHECK(parse_error(with_item(R"({"bus":{"LeadVehicle":"Leader"}})")).find("undeclared role") != std::string::npos);
  CHECK(parse_error(with_item(R"({"car":{"Mood":"Happy"}})")).find("unknown dimension") != std::string::npos);
  CHECK(parse_error(with_item(R"({"ego":{"LeadVehicle":"Leader"}})")).find("does not apply") != std::string::npos);
  CHECK(parse_error(with_item(R"({"car":{"LeadVehicle":{"xor":["Leader"]}}})")).find("unknown operator") !=
        std::string::npos);
  CHECK(parse_error(with_item(R"({"car":{"LeadVehicle":{"or":[]}}})")).find("non-empty") != std::string::npos);
  CHECK(parse_error(with_item(R"({"car":{"LeadVehicle":5}})")).find("expression") != std::string::npos);
  CHECK_THROWS_WITH_AS(load_category("/nonexistent/c.json"), doctest::Contains("/nonexistent/c.json"), DataError);
}

TEST_CASE("sample sets") {
  const SampleSet a = {{0, 10}, {20, 30}};
  const SampleSet b = {{5, 25}};
  CHECK(intersect(a, b) == SampleSet{{5, 10}, {20, 25}});
  CHECK(intersect(a, {}).empty());
  CHECK(to_mask({{1, 2}}, 4) == std::vector<std::uint8_t>{0, 1, 1, 0});
}

TEST_CASE("compiling conditions to sample sets") {
  const auto tags = small_tags();
  const Binding binding = {Subject::ego(), Subject::object(4)};
  SUBCASE("single literal") {
    const auto cat = parse_category(with_item(R"({"ego":{"LongitudinalActivity":"Accelerating"}})"));
    CHECK(compile(cat, tags, binding) == std::vector<SampleSet>{{{100, 200}}});
  }
  SUBCASE("conditions in one item intersect") {
    const auto cat = parse_category(
        with_item(R"({"ego":{"LongitudinalActivity":"Accelerating","LateralActivity":"ChangingLaneLeft"}})"));
    CHECK(compile(cat, tags, binding) == std::vector<SampleSet>{{{150, 180}}});
  }
  SUBCASE("negation is false where the subject is unobserved") {
    const auto cat = parse_category(with_item(R"({"car":{"LeadVehicle":{"not":"Leader"}}})"));
    CHECK(compile(cat, tags, binding) == std::vector<SampleSet>{{{550, 600}}});
  }
  SUBCASE("conjunction of negations") {
    const auto cat = parse_category(
        with_item(R"({"ego":{"LongitudinalActivity":{"and":[{"not":"Cruising"},{"not":"Decelerating"}]}}})"));
    CHECK(compile(cat, tags, binding) == std::vector<SampleSet>{{{100, 200}}});
  }
  SUBCASE("binding must cover every role") {
    const auto cat = parse_category(with_item(R"({"ego":{"LongitudinalActivity":"Cruising"}})"));
    CHECK_THROWS_AS(compile(cat, tags, {Subject::ego()}), DataError);
  }
  SUBCASE("untagged dimension") {
    const auto cat = parse_category(with_item(R"({"car":{"LateralState":"LeftOfEgo"}})"));
    CHECK_THROWS_WITH_AS(check_tagged(cat, tags), doctest::Contains("LateralState"), DataError);
  }
}

TEST_CASE("bindings are injective over vehicle roles") {
  TaggedDataset t({0.01, 10, 0.0}, {1, 2, 3});
  const auto cat = parse_category(
      R"({"name":"x","roles":[{"name":"a","kind":"vehicle"},{"name":"e","kind":"ego"},{"name":"b","kind":"vehicle"}],)"
      R"("items":[{"a":{"LeadVehicle":"Leader"}}]})");
  const auto bindings = enumerate_bindings(cat, t);
  CHECK(bindings.size() == 6);
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (const auto& b : bindings) {
    CHECK(b[1] == Subject::ego());
    CHECK(b[0] != b[2]);
    seen.insert({b[0].id, b[2].id});
  }
  CHECK(seen.size() == 6);
  CHECK(enumerate_bindings(cat, TaggedDataset({0.01, 10, 0.0}, {1})).empty());
}

TEST_CASE("expression laws on random tags") {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto tags = synth::random_tagged(seed, 300, 2);
    for (const TagStream* s : tags.streams()) {
      const auto dim = s->dimension;
      const auto a = random_expr(rng, dim, 0);
      const auto b = random_expr(rng, dim, 0);
      const auto lhs = dense(tags, s->subject, dim, TagExpression::negate(TagExpression::any_of({a, b})));
      const auto rhs = dense(tags, s->subject, dim,
                             TagExpression::all_of({TagExpression::negate(a), TagExpression::negate(b)}));
      REQUIRE(lhs == rhs);
      const auto da = dense(tags, s->subject, dim, a);
      const auto dor = dense(tags, s->subject, dim, TagExpression::any_of({a, b}));
      for (std::size_t k = 0; k < da.size(); ++k) REQUIRE(dor[k] >= da[k]);
    }
  }
}

TEST_CASE("compiled sets equal dense per-sample evaluation") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto tags = synth::random_tagged(seed, 400, 1 + seed % 3);
    const auto cat = synth::random_category(seed * 13);
    for (const auto& binding : enumerate_bindings(cat, tags)) {
      const auto series = compile_series(cat, tags, binding);
      REQUIRE(series.size() == cat.items.size());
      for (std::size_t i = 0; i < cat.items.size(); ++i) {
        std::vector<std::uint8_t> want(tags.timebase().n_samples, 1);
        for (const auto& c : cat.items[i].conditions) {
          const auto m = dense(tags, binding[c.role], c.dimension, c.expr);
          for (std::size_t k = 0; k < want.size(); ++k) want[k] &= m[k];
        }
        REQUIRE(series[i] == want);
      }
    }
  }
}
