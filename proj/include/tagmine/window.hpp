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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tagmine {

// Sliding-window kernels shared by the taggers. All run in O(n) with a
// monotone index deque. A trailing window at k covers [max(0, k-k_h), k];
// a leading window covers [k, min(k+k_h, n-1)].
//
// The masked variants skip samples whose mask entry is 0. A window without
// any valid sample yields NaN.

struct Extrema {
  std::vector<double> min;
  std::vector<double> max;
};

struct RiseFall {
  std::vector<double> inc;  // signal - trailing min, >= 0
  std::vector<double> dec;  // signal - trailing max, <= 0
};

/// Trailing-window minimum and maximum. Throws DataError("empty series").
Extrema windowed_extrema(std::span<const double> signal, std::size_t k_h);

/// Rise above the trailing minimum and fall below the trailing maximum.
RiseFall rise_fall(std::span<const double> signal, std::size_t k_h);

std::vector<double> trailing_min(std::span<const double> signal, std::size_t k_h,
                                 std::span<const std::uint8_t> valid = {});
std::vector<double> trailing_max(std::span<const double> signal, std::size_t k_h,
                                 std::span<const std::uint8_t> valid = {});
std::vector<double> leading_min(std::span<const double> signal, std::size_t k_h,
                                std::span<const std::uint8_t> valid = {});
std::vector<double> leading_max(std::span<const double> signal, std::size_t k_h,
                                std::span<const std::uint8_t> valid = {});

}  // namespace tagmine
