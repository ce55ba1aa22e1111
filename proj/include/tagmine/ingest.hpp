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

#include <iosfwd>
#include <string>

#include "tagmine/model.hpp"

namespace tagmine {

// CSV logs.
//
//   ego.csv      k,t,v,dy_left,dy_right[,lat,lon,road_class]
//   objects.csv  k,id,dx,dy,v_rel[,dy_left_i,dy_right_i]
//
// Header row mandatory, columns matched by name, `.` decimal separator,
// empty cell = missing. Missing lane-line cells clear line_valid for that
// sample; an object is unobserved at every k without a row for it.

/// Loads and validates both files. `objects_path` may be empty (no objects).
/// The mean sample period of the ego file must equal params.ts within 1e-9 s.
Dataset load_dataset(const std::string& ego_path, const std::string& objects_path,
                     const Params& params, Diagnostics* diag = nullptr);

Dataset read_dataset(std::istream& ego_csv, std::istream* objects_csv, const Params& params,
                     Diagnostics* diag = nullptr, const std::string& ego_name = "ego.csv",
                     const std::string& objects_name = "objects.csv");

/// Writes the same schemas; doubles are printed with round-trip precision.
void write_ego_csv(std::ostream& out, const Dataset& data);
void write_objects_csv(std::ostream& out, const Dataset& data);
void save_dataset(const Dataset& data, const std::string& ego_path,
                  const std::string& objects_path);

}  // namespace tagmine
