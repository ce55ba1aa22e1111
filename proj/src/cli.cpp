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

#include "tagmine/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tagmine/category.hpp"
#include "tagmine/eval.hpp"
#include "tagmine/ingest.hpp"
#include "tagmine/miner.hpp"
#include "tagmine/pipeline.hpp"
#include "tagmine/synth.hpp"
#include "tagmine/tagger_state.hpp"

namespace tagmine {
namespace {

namespace fs = std::filesystem;

struct GenOptions {
  std::string scenario = "corpus";
  std::string out_dir;
  std::uint64_t seed = 1;
  std::size_t cut_ins = 50;
  std::size_t overtakings = 50;
  double sigma_v = 0.0;
  double sigma_line = 0.0;
  bool no_distractors = false;
  bool from_right = false;
};

struct TagOptions {
  std::string in_dir;
  std::string ego;
  std::string objects;
  std::string roads;
  std::string out;
};

struct MineOptions {
  std::string tags;
  std::vector<std::string> categories;
  std::string out;
};

struct EvalOptions {
  std::string instances;
  std::string truth;
  std::string format = "table";
};

struct InspectOptions {
  std::string tags;
  std::optional<std::size_t> from;
  std::optional<std::size_t> to;
  std::size_t width = 100;
  std::string subject;
};

void report_warnings(const Diagnostics& diag, std::ostream& err) {
  for (const auto& w : diag.warnings) err << "warning: " << w << '\n';
}

// Writes to `path`, or to `out` when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw DataError("cannot write " + path);
  write(file);
  if (!file) throw DataError("write failed: " + path);
}

int cmd_gen(const GenOptions& o, const Params& params, std::ostream& out) {
  synth::Scene scene;
  if (o.scenario == "cutin") {
    synth::CutInSpec spec;
    spec.ts = params.ts;
    spec.from_right = o.from_right;
    if (!o.no_distractors) spec.distractor = synth::Distractor{};
    scene = synth::gen_cutin_scene(spec, params);
  } else if (o.scenario == "overtaking") {
    synth::OvertakingSpec spec;
    spec.ts = params.ts;
    if (!o.no_distractors) spec.distractor = synth::Distractor{};
    scene = synth::gen_overtaking_scene(spec);
  } else {
    synth::CorpusSpec spec;
    spec.cut_ins = o.cut_ins;
    spec.overtakings = o.overtakings;
    spec.seed = o.seed;
    spec.ts = params.ts;
    spec.distractors = !o.no_distractors;
    scene = synth::gen_corpus(spec);
  }
  if (o.sigma_v > 0 || o.sigma_line > 0) {
    synth::add_noise(scene.data, o.sigma_v, o.sigma_line, o.seed);
  }
  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  save_dataset(scene.data, (dir / "ego.csv").string(), (dir / "objects.csv").string());
  save_truth(scene.truth, (dir / "truth.csv").string());
  out << "wrote " << scene.data.timebase.n_samples << " samples, " << scene.data.objects.size()
      << " objects, " << scene.truth.size() << " ground-truth scenarios to " << o.out_dir << '\n';
  return kExitOk;
}

int cmd_tag(const TagOptions& o, const Params& params, std::ostream& out, std::ostream& err) {
  std::string ego = o.ego, objects = o.objects;
  if (!o.in_dir.empty()) {
    const fs::path dir(o.in_dir);
    if (ego.empty()) ego = (dir / "ego.csv").string();
    if (objects.empty() && fs::exists(dir / "objects.csv")) objects = (dir / "objects.csv").string();
  }
  if (ego.empty()) throw CLI::ValidationError("tag", "need --in DIR or --ego FILE");
  Diagnostics diag;
  const Dataset data = load_dataset(ego, objects, params, &diag);
  std::optional<RoadClassProvider> roads;
  if (!o.roads.empty()) roads = RoadClassProvider::load(o.roads);
  TaggingOptions opts;
  opts.roads = roads ? &*roads : nullptr;
  const TaggedDataset tagged = tag_dataset(data, params, opts, &diag);
  report_warnings(diag, err);
  emit(o.out, out, [&](std::ostream& s) { write_tags(s, tagged); });
  return kExitOk;
}

int cmd_mine(const MineOptions& o, const Params& params, std::ostream& out) {
  const TaggedDataset tagged = load_tags(o.tags);
  std::vector<ScenarioCategory> cats;
  for (const auto& path : o.categories) cats.push_back(load_category(path));
  const auto found = mine_all(tagged, cats, params);
  emit(o.out, out, [&](std::ostream& s) { write_instances(s, found, tagged.timebase()); });
  return kExitOk;
}

int cmd_eval(const EvalOptions& o, const Params& params, std::ostream& out, std::ostream& err) {
  const auto mined = load_instances(o.instances);
  const auto truth = load_truth(o.truth);
  Diagnostics diag;
  const Report report = match_and_score(mined, truth, params, &diag);
  report_warnings(diag, err);
  out << (o.format == "json" ? format_report_json(report) + "\n" : format_report_table(report));
  return kExitOk;
}

// One letter per value, unique within a dimension.
char glyph(Dimension dim, TagValue v) {
  static constexpr const char* kGlyphs[kDimensionCount] = {"CAD", "FLR", "FB", "LSRU", "LN", "HN"};
  return kGlyphs[static_cast<std::size_t>(dim)][v];
}

int cmd_inspect(const InspectOptions& o, std::ostream& out) {
  const TaggedDataset tagged = load_tags(o.tags);
  const std::size_t n = tagged.timebase().n_samples;
  if (n == 0) {
    out << "no samples\n";
    return kExitOk;
  }
  const std::size_t from = std::min(o.from.value_or(0), n - 1);
  const std::size_t to = std::min(o.to.value_or(n - 1), n - 1);
  if (from > to) throw CLI::ValidationError("inspect", "--from must not exceed --to");
  std::optional<Subject> only;
  if (!o.subject.empty()) {
    only = Subject::parse(o.subject);
    if (!only) throw CLI::ValidationError("inspect", "bad subject '" + o.subject + "'");
  }
  const std::size_t span = to - from + 1;
  const std::size_t cols = std::clamp<std::size_t>(o.width, 1, span);
  const std::size_t step = (span + cols - 1) / cols;
  const auto& tb = tagged.timebase();
  out << std::fixed << std::setprecision(2) << "samples " << from << ".." << to << " (t "
      << tb.time_at(from) << ".." << tb.time_at(to) << " s), " << step << " sample"
      << (step == 1 ? "" : "s") << " per column\n";

  std::vector<Dimension> shown;
  for (const TagStream* s : tagged.streams()) {
    if (only && s->subject != *only) continue;
    std::string lane;
    bool any = false;
    for (std::size_t k = from; k <= to; k += step) {
      const auto v = s->at(k);
      lane += v ? glyph(s->dimension, *v) : '.';
      any = any || v.has_value();
    }
    if (!any) continue;
    if (std::find(shown.begin(), shown.end(), s->dimension) == shown.end()) {
      shown.push_back(s->dimension);
    }
    out << std::left << std::setw(12) << s->subject.to_string() << ' ' << std::setw(21)
        << dimension_name(s->dimension) << ' ' << lane << '\n';
  }
  std::sort(shown.begin(), shown.end());
  out << "legend:\n";
  for (auto dim : shown) {
    out << "  " << std::left << std::setw(21) << dimension_name(dim);
    const auto names = value_names(dim);
    for (std::size_t v = 0; v < names.size(); ++v) {
      out << ' ' << glyph(dim, static_cast<TagValue>(v)) << '=' << names[v];
    }
    out << '\n';
  }
  out << "  '.' = not tagged\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tag driving logs and mine scenario instances from the tags.", "tagmine"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string params_path;
  int jobs = 0;
  app.add_option("--params", params_path, "Parameter file (key = value lines)");
  app.add_option("--jobs", jobs, "Worker threads (default: all cores)")->check(CLI::PositiveNumber);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Write a synthetic log with planted scenarios");
  g->add_option("--scenario", gen.scenario, "cutin, overtaking or corpus")
      ->check(CLI::IsMember({"cutin", "overtaking", "corpus"}));
  g->add_option("--out", gen.out_dir, "Output directory (ego.csv, objects.csv, truth.csv)")
      ->required();
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--cut-ins", gen.cut_ins, "Cut-ins in a corpus");
  g->add_option("--overtakings", gen.overtakings, "Overtakings in a corpus");
  g->add_option("--sigma-v", gen.sigma_v, "Gaussian noise on ego speed, m/s")
      ->check(CLI::NonNegativeNumber);
  g->add_option("--sigma-line", gen.sigma_line, "Gaussian noise on lane-line distances, m")
      ->check(CLI::NonNegativeNumber);
  g->add_flag("--no-distractors", gen.no_distractors, "Omit adjacent-lane traffic");
  g->add_flag("--from-right", gen.from_right, "Single cut-in enters from the right");

  TagOptions tag;
  auto* t = app.add_subcommand("tag", "Tag a log");
  t->add_option("--in", tag.in_dir, "Directory holding ego.csv and objects.csv");
  t->add_option("--ego", tag.ego, "Ego CSV");
  t->add_option("--objects", tag.objects, "Objects CSV");
  t->add_option("--roads", tag.roads, "GeoJSON road map for the OnHighway tag");
  t->add_option("--out", tag.out, "Tag file (default: stdout)");

  MineOptions mine_opts;
  auto* m = app.add_subcommand("mine", "Mine scenario instances from a tag file");
  m->add_option("--tags", mine_opts.tags, "Tag file")->required();
  m->add_option("--category", mine_opts.categories, "Category file (repeatable)")->required();
  m->add_option("--out", mine_opts.out, "Instances JSONL (default: stdout)");

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Score mined instances against ground truth");
  e->add_option("--instances", ev.instances, "Instances JSONL")->required();
  e->add_option("--truth", ev.truth, "Ground-truth CSV")->required();
  e->add_option("--format", ev.format, "table or json")->check(CLI::IsMember({"table", "json"}));

  InspectOptions ins;
  auto* i = app.add_subcommand("inspect", "Print tag lanes for a sample range");
  i->add_option("--tags", ins.tags, "Tag file")->required();
  i->add_option("--from", ins.from, "First sample");
  i->add_option("--to", ins.to, "Last sample");
  i->add_option("--width", ins.width, "Columns per lane")->check(CLI::PositiveNumber);
  i->add_option("--subject", ins.subject, "Only this subject (ego, environment, object:ID)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    Params params;
    if (!params_path.empty()) params = load_params(params_path);
    params.validate();
    if (jobs > 0) omp_set_num_threads(jobs);
    if (*g) return cmd_gen(gen, params, out);
    if (*t) return cmd_tag(tag, params, out, err);
    if (*m) return cmd_mine(mine_opts, params, out);
    if (*e) return cmd_eval(ev, params, out, err);
    return cmd_inspect(ins, out);
  } catch (const CLI::ValidationError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const DataError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitData;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitData;
  }
}

}  // namespace tagmine
