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

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tagmine/cli.hpp"
#include "tagmine/pipeline.hpp"

using namespace tagmine;
namespace fs = std::filesystem;

namespace {

const std::string kDir = TAGMINE_CATEGORY_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "tagmine");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("tagmine-cli-" + std::to_string(::getpid()) + "-" +
                                                 std::to_string(counter_++))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }
  std::string str() const { return path_.string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t ego_cruise_count(const std::string& tags_path) {
  const auto tagged = load_tags(tags_path);
  const auto* s = tagged.find(Subject::ego(), Dimension::LongitudinalActivity);
  std::size_t n = 0;
  for (const auto& iv : s->intervals) n += iv.value == code(LongitudinalActivity::Cruising);
  return n;
}

}  // namespace

TEST_CASE("gen, tag, mine and eval end to end") {
  TempDir dir;
  auto r = run({"gen", "--scenario", "corpus", "--cut-ins", "4", "--overtakings", "3", "--seed", "5", "--out",
                dir.str()});
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(dir / "ego.csv"));
  CHECK(fs::exists(dir / "objects.csv"));
  CHECK(fs::exists(dir / "truth.csv"));

  r = run({"tag", "--in", dir.str(), "--out", dir / "tags.jsonl"});
  REQUIRE(r.code == kExitOk);
  r = run({"mine", "--tags", dir / "tags.jsonl", "--category", kDir + "/cut_in.json", "--category",
           kDir + "/overtaking_before_lane_change.json", "--out", dir / "instances.jsonl"});
  REQUIRE(r.code == kExitOk);
  r = run({"eval", "--instances", dir / "instances.jsonl", "--truth", dir / "truth.csv", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["overall"]["tp"] == 7);
  CHECK(doc["overall"]["precision"] == 1.0);
  CHECK(doc["overall"]["recall"] == 1.0);
  CHECK(doc["overall"]["f1"] == 1.0);

  r = run({"eval", "--instances", dir / "instances.jsonl", "--truth", dir / "truth.csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("cut_in") != std::string::npos);

  r = run({"inspect", "--tags", dir / "tags.jsonl", "--from", "0", "--to", "999", "--width", "50"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("ego") != std::string::npos);
}

TEST_CASE("tag output is byte-identical across runs and thread counts") {
  TempDir dir;
  REQUIRE(run({"gen", "--scenario", "corpus", "--cut-ins", "3", "--overtakings", "3", "--sigma-v", "0.3",
               "--out", dir.str()})
              .code == kExitOk);
  const auto a = run({"tag", "--in", dir.str()});
  const auto b = run({"tag", "--in", dir.str(), "--jobs", "1"});
  const auto c = run({"--jobs", "3", "tag", "--in", dir.str()});
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  REQUIRE(run({"tag", "--in", dir.str(), "--out", dir / "t.jsonl"}).code == kExitOk);
  CHECK(slurp(dir / "t.jsonl") == a.out);
}

TEST_CASE("k_cruise from a parameter file changes the tagging") {
  TempDir dir;
  REQUIRE(run({"gen", "--scenario", "corpus", "--cut-ins", "5", "--overtakings", "5", "--sigma-v", "0.3",
               "--out", dir.str()})
              .code == kExitOk);
  {
    std::ofstream params(dir / "params.txt");
    params << "k_cruise = 1\n";
  }
  REQUIRE(run({"tag", "--in", dir.str(), "--out", dir / "default.jsonl"}).code == kExitOk);
  REQUIRE(run({"--params", dir / "params.txt", "tag", "--in", dir.str(), "--out", dir / "loose.jsonl"}).code ==
          kExitOk);
  CHECK(ego_cruise_count(dir / "loose.jsonl") > ego_cruise_count(dir / "default.jsonl"));
}

TEST_CASE("scenario generators") {
  TempDir dir;
  CHECK(run({"gen", "--scenario", "cutin", "--from-right", "--out", dir / "a"}).code == kExitOk);
  CHECK(run({"gen", "--scenario", "overtaking", "--out", dir / "b"}).code == kExitOk);
  CHECK(slurp(dir / "b/truth.csv").find("overtaking_before_lane_change") != std::string::npos);
  CHECK(run({"gen", "--scenario", "parade", "--out", dir / "c"}).code == kExitUsage);
}

TEST_CASE("data errors exit 2 and name the file") {
  TempDir dir;
  auto r = run({"mine", "--tags", dir / "nope.jsonl", "--category", kDir + "/cut_in.json"});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("nope.jsonl") != std::string::npos);

  r = run({"tag", "--in", dir / "missing"});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("ego.csv") != std::string::npos);

  {
    std::ofstream bad(dir / "params.txt");
    bad << "k_h = -3\n";
  }
  r = run({"--params", dir / "params.txt", "tag", "--in", dir.str()});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("k_h") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"--bogus"}).code == kExitUsage);
  CHECK(run({"tag", "--bogus"}).code == kExitUsage);
  CHECK(run({"mine"}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  const auto help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("mine") != std::string::npos);
}

TEST_CASE("installed binary runs") {
  const std::string cmd = std::string("\"") + TAGMINE_CLI_PATH + "\" --help > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
