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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tagmine/model.hpp"
#include "tagmine/pipeline.hpp"

namespace tagmine {

/// Boolean expression over the value of one tag dimension.
struct TagExpression {
  enum class Op : std::uint8_t { Literal, And, Or, Not };
  Op op = Op::Literal;
  TagValue value = 0;  // Literal only
  std::vector<TagExpression> children;

  static TagExpression literal(TagValue v) { return {Op::Literal, v, {}}; }
  static TagExpression all_of(std::vector<TagExpression> c) { return {Op::And, 0, std::move(c)}; }
  static TagExpression any_of(std::vector<TagExpression> c) { return {Op::Or, 0, std::move(c)}; }
  static TagExpression negate(TagExpression c) { return {Op::Not, 0, {std::move(c)}}; }

  /// Truth value for a present tag. Absent tags never reach here: an
  /// expression over an unobserved subject is false, including under Not.
  bool eval(TagValue v) const;
  bool operator==(const TagExpression&) const = default;
};

struct Role {
  enum class Kind : std::uint8_t { Ego, Vehicle, Environment };
  std::string name;
  Kind kind = Kind::Vehicle;
};

/// Dimensions a subject kind can carry.
std::span<const Dimension> dimensions_for(Role::Kind kind);
Subject::Kind subject_kind(Role::Kind kind);

struct Condition {
  std::size_t role = 0;  // index into ScenarioCategory::roles
  Dimension dimension = Dimension::LongitudinalActivity;
  TagExpression expr;
};

/// One step of a category: every condition holds at the same sample.
struct Item {
  std::vector<Condition> conditions;
};

struct ScenarioCategory {
  std::string name;
  std::vector<Role> roles;
  std::vector<Item> items;

  std::optional<std::size_t> role_index(std::string_view role_name) const;
  /// Indices of vehicle roles in declaration order.
  std::vector<std::size_t> vehicle_roles() const;
};

/// JSON category document:
///
///   {"name": "cut_in",
///    "roles": [{"name": "ego", "kind": "ego"},
///              {"name": "other", "kind": "vehicle"},
///              {"name": "env", "kind": "environment"}],
///    "items": [{"ego":   {"LateralActivity": "FollowingLane"},
///               "other": {"LateralActivity": {"or": ["ChangingLaneLeft",
///                                                    "ChangingLaneRight"]},
///                         "LeadVehicle": {"not": "Leader"}}}]}
///
/// An expression is a value name, {"and": [..]}, {"or": [..]} or {"not": e}.
ScenarioCategory parse_category(std::string_view json_text, const std::string& source = "category");
ScenarioCategory load_category(const std::string& path);
std::string format_category(const ScenarioCategory& category);

/// Sorted, disjoint, non-adjacent closed sample ranges.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};
using SampleSet = std::vector<Span>;

SampleSet intersect(const SampleSet& a, const SampleSet& b);
std::vector<std::uint8_t> to_mask(const SampleSet& set, std::size_t n);

/// Subject bound to each role (same order as category.roles).
using Binding = std::vector<Subject>;

/// Ego and environment roles fixed; vehicle roles range over injective
/// assignments of object ids, enumerated in lexicographic id order.
std::vector<Binding> enumerate_bindings(const ScenarioCategory& category,
                                        const TaggedDataset& tagged);

/// Throws DataError when the category references a dimension the dataset
/// does not carry for the role's subject kind.
void check_tagged(const ScenarioCategory& category, const TaggedDataset& tagged);

/// Samples where each item holds under `binding`, one set per item.
std::vector<SampleSet> compile(const ScenarioCategory& category, const TaggedDataset& tagged,
                               const Binding& binding);

/// Dense form of compile(): B[j][k] is 1 iff item j holds at sample k.
std::vector<std::vector<std::uint8_t>> compile_series(const ScenarioCategory& category,
                                                      const TaggedDataset& tagged,
                                                      const Binding& binding);

}  // namespace tagmine
