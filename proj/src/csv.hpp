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

// Minimal header-addressed CSV reader shared by the file loaders.

#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagmine/model.hpp"

namespace tagmine::detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    cells.push_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

class CsvReader {
 public:
  CsvReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {
    if (!next_line()) throw DataError(name_ + ": missing header row");
    auto cells = split(line_);
    for (std::size_t i = 0; i < cells.size(); ++i) columns_[std::string(cells[i])] = i;
  }

  std::optional<std::size_t> column(const std::string& col) const {
    auto it = columns_.find(col);
    if (it == columns_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require(const std::string& col) const {
    auto c = column(col);
    if (!c) throw DataError(name_ + ": missing column '" + col + "'");
    return *c;
  }

  bool next_row() {
    while (next_line()) {
      if (line_.empty()) continue;
      cells_ = split(line_);
      if (cells_.size() != columns_.size()) fail("expected " + std::to_string(columns_.size()) +
                                                 " cells, got " + std::to_string(cells_.size()));
      return true;
    }
    return false;
  }

  std::string_view cell(std::size_t col) const { return cells_[col]; }

  /// NaN for an empty cell.
  double number(std::size_t col) const {
    auto text = cells_[col];
    if (text.empty()) return kNaN;
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      fail("invalid number '" + std::string(text) + "'");
    }
    return v;
  }

  double required_number(std::size_t col, const char* what) const {
    double v = number(col);
    if (!std::isfinite(v)) fail(std::string("missing or non-finite ") + what);
    return v;
  }

  template <class Int>
  Int integer(std::size_t col, const char* what) const {
    auto text = cells_[col];
    Int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
      fail(std::string("invalid ") + what + " '" + std::string(text) + "'");
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError(name_ + ":" + std::to_string(line_no_) + ": " + msg);
  }

  std::size_t line_no() const { return line_no_; }

 private:
  bool next_line() {
    if (!std::getline(in_, buffer_)) return false;
    ++line_no_;
    if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
    line_ = buffer_;
    return true;
  }

  std::istream& in_;
  std::string name_;
  std::string buffer_;
  std::string_view line_;
  std::vector<std::string_view> cells_;
  std::map<std::string, std::size_t> columns_;
  std::size_t line_no_ = 0;
};

}  // namespace tagmine::detail
