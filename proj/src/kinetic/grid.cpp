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

#include "kmmc/kinetic/grid.hpp"

#include <cmath>

#include "kmmc/error.hpp"

namespace kmmc::kinetic {

Grid::Grid(double lo_, double hi_, std::size_t cells_) : lo(lo_), hi(hi_), cells(cells_) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw ValidationError("grid requires lo < hi");
  if (cells == 0) throw ValidationError("grid needs at least one cell");
}

std::vector<double> Grid::edges() const {
  std::vector<double> e(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) e[i] = face(i);
  e.back() = hi;
  return e;
}

std::vector<double> Grid::centers() const {
  std::vector<double> c(cells);
  for (std::size_t i = 0; i < cells; ++i) c[i] = center(i);
  return c;
}

GridDensity::GridDensity(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.cells) throw ValidationError("density size does not match grid");
  for (double x : values)
    if (!std::isfinite(x)) throw ValidationError("density values must be finite");
}

double GridDensity::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.dx();
}

GridDensity& GridDensity::normalize() {
  const double m = mass();
  if (!(m > 0.0)) throw ValidationError("density has no mass");
  for (double& v : values) v /= m;
  return *this;
}

GridDensity GridDensity::from_function(const Grid& grid, const std::function<double(double)>& density) {
  std::vector<double> v(grid.cells);
  for (std::size_t i = 0; i < grid.cells; ++i) v[i] = density(grid.center(i));
  GridDensity f(grid, std::move(v));
  f.normalize();
  return f;
}

GridDensity GridDensity::uniform_on(const Grid& grid, double a, double b) {
  return from_function(grid, [a, b](double x) { return x >= a && x <= b ? 1.0 : 0.0; });
}

double l1_distance(const GridDensity& f, const GridDensity& g) {
  if (!(f.grid == g.grid)) throw ValidationError("densities live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += std::abs(f.values[i] - g.values[i]);
  return s * f.grid.dx();
}

std::vector<double> coarse_masses(const GridDensity& f, std::size_t bins) {
  if (bins == 0 || f.grid.cells % bins != 0) throw ValidationError("coarse bins must divide the cell count");
  const std::size_t per = f.grid.cells / bins;
  std::vector<double> out(bins, 0.0);
  for (std::size_t i = 0; i < f.grid.cells; ++i) out[i / per] += f.values[i] * f.grid.dx();
  return out;
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ValidationError("probability vectors differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s;
}

GridMoments moments(const GridDensity& f) {
  const double m = f.mass();
  if (!(m > 0.0)) throw ValidationError("density has no mass");
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < f.grid.cells; ++i) {
    const double x = f.grid.center(i);
    s1 += x * f.values[i];
    s2 += x * x * f.values[i];
  }
  const double dx = f.grid.dx();
  const double mean = s1 * dx / m;
  return {mean, s2 * dx / m - mean * mean};
}

}  // namespace kmmc::kinetic
