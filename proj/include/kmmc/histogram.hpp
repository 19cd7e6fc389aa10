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
#include <span>
#include <vector>

#include "kmmc/point.hpp"

namespace kmmc {

/// Counts over half-open bins [e_k, e_{k+1}); the last bin is closed.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::int64_t> counts;
  /// Samples that fell outside [edges.front(), edges.back()] and were
  /// clamped into the boundary bin.
  std::int64_t clamped = 0;

  [[nodiscard]] std::int64_t total() const;
  /// Fraction of samples per bin.
  [[nodiscard]] std::vector<double> probabilities() const;
};

[[nodiscard]] std::vector<double> uniform_edges(double lo, double hi, std::size_t bins);

[[nodiscard]] Histogram histogram_1d(std::span<const double> values, std::vector<double> edges);

/// One histogram per coordinate of the samples.
[[nodiscard]] std::vector<Histogram> empirical_density(std::span<const ParameterPoint> samples,
                                                       std::span<const std::vector<double>> edges);

/// Coordinate `dim` of every sample.
[[nodiscard]] std::vector<double> component(std::span<const ParameterPoint> samples, std::size_t dim);

}  // namespace kmmc
