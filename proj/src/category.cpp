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

#include "tagmine/category.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tagmine {
namespace {

using ojson = nlohmann::ordered_json;

constexpr Dimension kEgoDims[] = {Dimension::LongitudinalActivity, Dimension::LateralActivity};
constexpr Dimension kVehicleDims[] = {Dimension::LongitudinalActivity, Dimension::LateralActivity,
                                      Dimension::LongitudinalState, Dimension::LateralState,
                                      Dimension::LeadVehicle};
constexpr Dimension kEnvDims[] = {Dimension::OnHighway};

constexpr std::size_t kMaxDepth = 64;

std::string_view kind_name(Role::Kind kind) {
  switch (kind) {
    case Role::Kind::Ego: return "ego";
    case Role::Kind::Vehicle: return "vehicle";
    case Role::Kind::Environment: return "environment";
  }
  return "";
}

std::string joined(std::span<const std::string_view> names) {
  std::string out;
  for (auto n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  ScenarioCategory run(const ojson& doc) {
    if (!doc.is_object()) fail("top level must be an object");
    ScenarioCategory cat;
    if (!doc.contains("name") || !doc["name"].is_string()) fail("missing string field 'name'");
    cat.name = doc["name"].get<std::string>();
    if (cat.name.empty()) fail("empty category name");

    if (!doc.contains("roles") || !doc["roles"].is_array()) fail("missing array field 'roles'");
    for (const auto& r : doc["roles"]) {
      if (!r.is_object() || !r.contains("name") || !r.contains("kind")) {
        fail("each role needs 'name' and 'kind'");
      }
      Role role;
      role.name = r["name"].get<std::string>();
      const auto kind = r["kind"].get<std::string>();
      if (kind == "ego") role.kind = Role::Kind::Ego;
      else if (kind == "vehicle") role.kind = Role::Kind::Vehicle;
      else if (kind == "environment") role.kind = Role::Kind::Environment;
      else fail("role '" + role.name + "': unknown kind '" + kind + "' (ego, vehicle, environment)");
      if (cat.role_index(role.name)) fail("duplicate role '" + role.name + "'");
      if (role.kind != Role::Kind::Vehicle) {
        for (const auto& other : cat.roles) {
          if (other.kind == role.kind) fail("more than one " + kind + " role");
        }
      }
      cat.roles.push_back(std::move(role));
    }

    if (!doc.contains("items") || !doc["items"].is_array()) fail("missing array field 'items'");
    if (doc["items"].empty()) fail("category has no items");
    std::size_t index = 0;
    for (const auto& it : doc["items"]) {
      ++index;
      const std::string where = "item " + std::to_string(index);
      if (!it.is_object()) fail(where + ": expected an object");
      Item item;
      for (const auto& [role_name, dims] : it.items()) {
        auto ri = cat.role_index(role_name);
        if (!ri) fail(where + ": undeclared role '" + role_name + "'");
        const Role& role = cat.roles[*ri];
        if (!dims.is_object()) fail(where + ": role '" + role_name + "' needs an object");
        for (const auto& [dim_name, expr] : dims.items()) {
          auto dim = parse_dimension(dim_name);
          if (!dim) fail(where + ": unknown dimension '" + dim_name + "'");
          const auto allowed = dimensions_for(role.kind);
          if (std::find(allowed.begin(), allowed.end(), *dim) == allowed.end()) {
            fail(where + ": dimension " + dim_name + " does not apply to " +
                 std::string(kind_name(role.kind)) + " role '" + role_name + "'");
          }
          item.conditions.push_back({*ri, *dim, expression(expr, *dim, where, 0)});
        }
      }
      if (item.conditions.empty()) fail(where + ": no conditions");
      cat.items.push_back(std::move(item));
    }
    return cat;
  }

  [[noreturn]] void fail(const std::string& what) const { throw DataError(source_ + ": " + what); }

 private:
  TagExpression expression(const ojson& e, Dimension dim, const std::string& where,
                           std::size_t depth) {
    if (depth > kMaxDepth) fail(where + ": expression nested too deeply");
    if (e.is_string()) {
      const auto name = e.get<std::string>();
      auto v = parse_value(dim, name);
      if (!v) {
        fail(where + ": unknown value " + std::string(dimension_name(dim)) + "=" + name +
             " (valid: " + joined(value_names(dim)) + ")");
      }
      return TagExpression::literal(*v);
    }
    if (!e.is_object() || e.size() != 1) {
      fail(where + ": expression must be a value name or one of {and, or, not}");
    }
    const std::string op = e.begin().key();
    const ojson& arg = e.begin().value();
    if (op == "not") return TagExpression::negate(expression(arg, dim, where, depth + 1));
    if (op != "and" && op != "or") fail(where + ": unknown operator '" + op + "'");
    if (!arg.is_array() || arg.empty()) fail(where + ": '" + op + "' needs a non-empty array");
    std::vector<TagExpression> children;
    for (const auto& c : arg) children.push_back(expression(c, dim, where, depth + 1));
    return op == "and" ? TagExpression::all_of(std::move(children))
                       : TagExpression::any_of(std::move(children));
  }

  std::string source_;
};

ojson expression_json(const TagExpression& e, Dimension dim) {
  switch (e.op) {
    case TagExpression::Op::Literal: return std::string(value_name(dim, e.value));
    case TagExpression::Op::Not: return ojson{{"not", expression_json(e.children.front(), dim)}};
    case TagExpression::Op::And:
    case TagExpression::Op::Or: {
      ojson arr = ojson::array();
      for (const auto& c : e.children) arr.push_back(expression_json(c, dim));
      return ojson{{e.op == TagExpression::Op::And ? "and" : "or", std::move(arr)}};
    }
  }
  return nullptr;
}

void push_span(SampleSet& set, std::size_t a, std::size_t b) {
  if (!set.empty() && set.back().end + 1 >= a) {
    set.back().end = std::max(set.back().end, b);
  } else {
    set.push_back({a, b});
  }
}

SampleSet satisfying(const TagStream* stream, const TagExpression& expr) {
  SampleSet out;
  if (stream == nullptr) return out;
  for (const auto& iv : stream->intervals) {
    if (expr.eval(iv.value)) push_span(out, iv.start_k, iv.end_k);
  }
  return out;
}

}  // namespace

bool TagExpression::eval(TagValue v) const {
  switch (op) {
    case Op::Literal: return v == value;
    case Op::Not: return !children.front().eval(v);
    case Op::And:
      return std::all_of(children.begin(), children.end(), [v](const auto& c) { return c.eval(v); });
    case Op::Or:
      return std::any_of(children.begin(), children.end(), [v](const auto& c) { return c.eval(v); });
  }
  return false;
}

std::span<const Dimension> dimensions_for(Role::Kind kind) {
  switch (kind) {
    case Role::Kind::Ego: return kEgoDims;
    case Role::Kind::Vehicle: return kVehicleDims;
    case Role::Kind::Environment: return kEnvDims;
  }
  return {};
}

Subject::Kind subject_kind(Role::Kind kind) {
  switch (kind) {
    case Role::Kind::Ego: return Subject::Kind::Ego;
    case Role::Kind::Vehicle: return Subject::Kind::Object;
    case Role::Kind::Environment: return Subject::Kind::Environment;
  }
  return Subject::Kind::Ego;
}

std::optional<std::size_t> ScenarioCategory::role_index(std::string_view role_name) const {
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (roles[i].name == role_name) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> ScenarioCategory::vehicle_roles() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (roles[i].kind == Role::Kind::Vehicle) out.push_back(i);
  }
  return out;
}

ScenarioCategory parse_category(std::string_view json_text, const std::string& source) {
  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(source + ": malformed JSON: " + e.what());
  }
  Parser parser(source);
  try {
    return parser.run(doc);
  } catch (const nlohmann::json::exception& e) {
    parser.fail(std::string("bad field type: ") + e.what());
  }
}

ScenarioCategory load_category(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open category file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_category(ss.str(), path);
}

std::string format_category(const ScenarioCategory& category) {
  ojson doc;
  doc["name"] = category.name;
  doc["roles"] = ojson::array();
  for (const auto& r : category.roles) {
    doc["roles"].push_back({{"name", r.name}, {"kind", kind_name(r.kind)}});
  }
  doc["items"] = ojson::array();
  for (const auto& item : category.items) {
    ojson it = ojson::object();
    for (const auto& c : item.conditions) {
      it[category.roles[c.role].name][std::string(dimension_name(c.dimension))] =
          expression_json(c.expr, c.dimension);
    }
    doc["items"].push_back(std::move(it));
  }
  return doc.dump(2);
}

SampleSet intersect(const SampleSet& a, const SampleSet& b) {
  SampleSet out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const std::size_t lo = std::max(a[i].start, b[j].start);
    const std::size_t hi = std::min(a[i].end, b[j].end);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].end < b[j].end) ++i;
    else ++j;
  }
  return out;
}

std::vector<std::uint8_t> to_mask(const SampleSet& set, std::size_t n) {
  std::vector<std::uint8_t> mask(n, 0);
  for (const auto& s : set) {
    std::fill(mask.begin() + s.start, mask.begin() + std::min(s.end + 1, n), 1);
  }
  return mask;
}

std::vector<Binding> enumerate_bindings(const ScenarioCategory& category,
                                        const TaggedDataset& tagged) {
  Binding base(category.roles.size());
  for (std::size_t r = 0; r < category.roles.size(); ++r) {
    if (category.roles[r].kind == Role::Kind::Ego) base[r] = Subject::ego();
    if (category.roles[r].kind == Role::Kind::Environment) base[r] = Subject::environment();
  }
  const auto vroles = category.vehicle_roles();
  const auto& ids = tagged.object_ids();
  std::vector<Binding> out;
  if (vroles.size() > ids.size()) return out;
  std::vector<bool> used(ids.size(), false);
  Binding current = base;
  auto assign = [&](auto&& self, std::size_t depth) -> void {
    if (depth == vroles.size()) {
      out.push_back(current);
      return;
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      current[vroles[depth]] = Subject::object(ids[i]);
      self(self, depth + 1);
      used[i] = false;
    }
  };
  assign(assign, 0);
  return out;
}

void check_tagged(const ScenarioCategory& category, const TaggedDataset& tagged) {
  std::set<std::pair<std::size_t, Dimension>> seen;
  for (const auto& item : category.items) {
    for (const auto& c : item.conditions) {
      if (!seen.insert({c.role, c.dimension}).second) continue;
      const Role& role = category.roles[c.role];
      if (!tagged.is_tagged(subject_kind(role.kind), c.dimension)) {
        throw DataError("category " + category.name + ": dimension " +
                        std::string(dimension_name(c.dimension)) + " is not tagged for " +
                        std::string(kind_name(role.kind)) + " subjects");
      }
    }
  }
}

std::vector<SampleSet> compile(const ScenarioCategory& category, const TaggedDataset& tagged,
                               const Binding& binding) {
  if (binding.size() != category.roles.size()) {
    throw DataError("category " + category.name + ": binding does not cover every role");
  }
  const std::size_t n = tagged.timebase().n_samples;
  std::vector<SampleSet> out;
  out.reserve(category.items.size());
  for (const auto& item : category.items) {
    SampleSet acc = n > 0 ? SampleSet{{0, n - 1}} : SampleSet{};
    for (const auto& c : item.conditions) {
      acc = intersect(acc, satisfying(tagged.find(binding[c.role], c.dimension), c.expr));
      if (acc.empty()) break;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<std::vector<std::uint8_t>> compile_series(const ScenarioCategory& category,
                                                      const TaggedDataset& tagged,
                                                      const Binding& binding) {
  std::vector<std::vector<std::uint8_t>> out;
  for (const auto& set : compile(category, tagged, binding)) {
    out.push_back(to_mask(set, tagged.timebase().n_samples));
  }
  return out;
}

}  // namespace tagmine
