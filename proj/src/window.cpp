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

#include "tagmine/window.hpp"

#include <deque>
#include <limits>

#include "tagmine/model.hpp"

namespace tagmine {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// `Better(a, b)` is true when a should replace b at the deque front.
template <class Better>
std::vector<double> trailing(std::span<const double> x, std::size_t k_h,
                             std::span<const std::uint8_t> valid, Better better) {
  const std::size_t n = x.size();
  std::vector<double> out(n, kNaN);
  std::deque<std::size_t> dq;
  for (std::size_t k = 0; k < n; ++k) {
    if (valid.empty() || valid[k]) {
      while (!dq.empty() && !better(x[dq.back()], x[k])) dq.pop_back();
      dq.push_back(k);
    }
    while (!dq.empty() && dq.front() + k_h < k) dq.pop_front();
    if (!dq.empty()) out[k] = x[dq.front()];
  }
  return out;
}

template <class Better>
std::vector<double> leading(std::span<const double> x, std::size_t k_h,
                            std::span<const std::uint8_t> valid, Better better) {
  const std::size_t n = x.size();
  std::vector<double> out(n, kNaN);
  std::deque<std::size_t> dq;
  for (std::size_t i = n; i-- > 0;) {
    if (valid.empty() || valid[i]) {
      while (!dq.empty() && !better(x[dq.back()], x[i])) dq.pop_back();
      dq.push_back(i);
    }
    while (!dq.empty() && dq.front() > i + k_h) dq.pop_front();
    if (!dq.empty()) out[i] = x[dq.front()];
  }
  return out;
}

// Strict comparison keeps the oldest of equal values, which never changes
// the reported extremum value.
constexpr auto kLess = [](double a, double b) { return a < b; };
constexpr auto kGreater = [](double a, double b) { return a > b; };

}  // namespace

std::vector<double> trailing_min(std::span<const double> signal, std::size_t k_h,
                                 std::span<const std::uint8_t> valid) {
  return trailing(signal, k_h, valid, kLess);
}

std::vector<double> trailing_max(std::span<const double> signal, std::size_t k_h,
                                 std::span<const std::uint8_t> valid) {
  return trailing(signal, k_h, valid, kGreater);
}

std::vector<double> leading_min(std::span<const double> signal, std::size_t k_h,
                                std::span<const std::uint8_t> valid) {
  return leading(signal, k_h, valid, kLess);
}

std::vector<double> leading_max(std::span<const double> signal, std::size_t k_h,
                                std::span<const std::uint8_t> valid) {
  return leading(signal, k_h, valid, kGreater);
}

Extrema windowed_extrema(std::span<const double> signal, std::size_t k_h) {
  if (signal.empty()) throw DataError("empty series");
  if (k_h == 0) throw DataError("window length k_h must be >= 1");
  return {trailing_min(signal, k_h), trailing_max(signal, k_h)};
}

RiseFall rise_fall(std::span<const double> signal, std::size_t k_h) {
  auto ext = windowed_extrema(signal, k_h);
  RiseFall rf;
  rf.inc.resize(signal.size());
  rf.dec.resize(signal.size());
  for (std::size_t k = 0; k < signal.size(); ++k) {
    rf.inc[k] = signal[k] - ext.min[k];
    rf.dec[k] = signal[k] - ext.max[k];
  }
  return rf;
}

}  // namespace tagmine
