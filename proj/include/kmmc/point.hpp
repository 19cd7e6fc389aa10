// Copyright 2026 The kmmc Authors
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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace kmmc {

/// A point in parameter space.
class ParameterPoint {
 public:
  ParameterPoint() = default;
  explicit ParameterPoint(std::size_t dim, double fill = 0.0) : coords_(dim, fill) {}
  ParameterPoint(std::initializer_list<double> values) : coords_(values) {}
  explicit ParameterPoint(std::vector<double> values) : coords_(std::move(values)) {}

  [[nodiscard]] std::size_t size() const noexcept { return coords_.size(); }
  double& operator[](std::size_t i) { return coords_[i]; }
  double operator[](std::size_t i) const { return coords_[i]; }

  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }
  auto begin() noexcept { return coords_.begin(); }
  auto end() noexcept { return coords_.end(); }

  [[nodiscard]] std::span<const double> values() const noexcept { return coords_; }
  [[nodiscard]] const std::vector<double>& coords() const noexcept { return coords_; }

  [[nodiscard]] bool all_finite() const {
    return std::all_of(coords_.begin(), coords_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const ParameterPoint&, const ParameterPoint&) = default;

 private:
  std::vector<double> coords_;
};

}  // namespace kmmc
