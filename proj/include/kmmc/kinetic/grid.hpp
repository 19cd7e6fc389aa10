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

// Uniform 1D cell grids and cell-averaged densities.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kmmc::kinetic {

struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t cells = 1;

  Grid() = default;
  Grid(double lo, double hi, std::size_t cells);

  [[nodiscard]] double dx() const noexcept { return (hi - lo) / static_cast<double>(cells); }
  [[nodiscard]] double center(std::size_t i) const noexcept { return lo + (static_cast<double>(i) + 0.5) * dx(); }
  /// Face i sits between cells i-1 and i; faces 0 and `cells` are the domain ends.
  [[nodiscard]] double face(std::size_t i) const noexcept { return lo + static_cast<double>(i) * dx(); }
  [[nodiscard]] std::vector<double> edges() const;
  [[nodiscard]] std::vector<double> centers() const;
  friend bool operator==(const Grid&, const Grid&) = default;
};

struct GridDensity {
  Grid grid;
  std::vector<double> values;

  GridDensity() = default;
  GridDensity(Grid g, std::vector<double> v);

  /// Sum of values * dx.
  [[nodiscard]] double mass() const;
  /// Rescales to unit mass. Throws when the mass is not positive.
  GridDensity& normalize();

  /// Midpoint samples of a nonnegative function, normalized to unit mass.
  static GridDensity from_function(const Grid& grid, const std::function<double(double)>& density);
  /// Uniform density on [a, b], resolved to whole cells (cells whose centers lie inside).
  static GridDensity uniform_on(const Grid& grid, double a, double b);
};

/// Sum |f - g| * dx. Both densities must share a grid.
[[nodiscard]] double l1_distance(const GridDensity& f, const GridDensity& g);

/// Masses of `bins` equal groups of consecutive cells; cells must divide evenly.
[[nodiscard]] std::vector<double> coarse_masses(const GridDensity& f, std::size_t bins);

/// Sum |p - q| for two probability vectors.
[[nodiscard]] double l1_distance(std::span<const double> p, std::span<const double> q);

struct GridMoments {
  double mean = 0.0;
  double variance = 0.0;
};
/// Mean and variance of a density, evaluated at cell centers.
[[nodiscard]] GridMoments moments(const GridDensity& f);

}  // namespace kmmc::kinetic
