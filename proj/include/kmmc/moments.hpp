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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kmmc/point.hpp"

namespace kmmc {

/// Running componentwise first and second moments of a chain history.
struct MomentVector {
  std::vector<double> first;
  std::vector<double> second;
  std::int64_t count = 0;

  static MomentVector zero(std::size_t dim) { return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0), 0}; }

  [[nodiscard]] std::size_t dim() const noexcept { return first.size(); }

  /// Empirical variance of component i, clamped at zero.
  [[nodiscard]] double variance(std::size_t i) const;

  /// Largest componentwise variance (zero for an empty history).
  [[nodiscard]] double max_variance() const;

  friend bool operator==(const MomentVector&, const MomentVector&) = default;
};

/// One moment update: ((x, x^2) + n*kappa) / (n + 1), count n + 1.
/// Throws ValidationError("invalid parameter") for non-finite x.
[[nodiscard]] MomentVector update_moments(const ParameterPoint& x, const MomentVector& kappa);

}  // namespace kmmc
