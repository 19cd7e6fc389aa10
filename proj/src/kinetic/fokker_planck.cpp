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

#include "kmmc/kinetic/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "kmmc/error.hpp"

namespace kmmc::kinetic {

double FPECoefficients::velocity(double x) const {
  const double s = sigma(x);
  return drift(x) * (1.0 - beta(x)) - s * s * beta_grad(x);
}

double FPECoefficients::diffusivity(double x) const {
  const double s = sigma(x);
  const double b = beta(x);
  return s * s * (diffusion == RejectionDiffusion::one_plus_beta ? 1.0 + b : 1.0 - b);
}

namespace {

/// Coefficients sampled on one grid: D at centers, u at interior faces.
struct Sampled {
  std::vector<double> d;
  std::vector<double> u;
};

Sampled sample(const Grid& grid, const FPECoefficients& c) {
  Sampled s{std::vector<double>(grid.cells), std::vector<double>(grid.cells + 1, 0.0)};
  for (std::size_t i = 0; i < grid.cells; ++i) {
    const double x = grid.center(i);
    const double sig = c.sigma(x);
    const double b = c.beta(x);
    if (!(sig > 0.0)) throw ValidationError("sigma must be positive");
    if (!(b >= 0.0 && b <= 1.0)) throw ValidationError("beta must lie in [0, 1]");
    s.d[i] = c.diffusivity(x);
  }
  for (std::size_t i = 1; i < grid.cells; ++i) {
    s.u[i] = c.velocity(grid.face(i));
    if (!std::isfinite(s.u[i])) throw ValidationError("non-finite drift");
  }
  return s;
}

double max_step(const Grid& grid, const Sampled& s) {
  const double dx = grid.dx();
  double bound = std::numeric_limits<double>::infinity();
  const double dmax = *std::max_element(s.d.begin(), s.d.end());
  if (dmax > 0.0) bound = std::min(bound, 0.4 * dx * dx / dmax);
  double umax = 0.0;
  for (double u : s.u) umax = std::max(umax, std::abs(u));
  if (umax > 0.0) bound = std::min(bound, 0.5 * dx / umax);
  return bound;
}

void step_in_place(std::vector<double>& f, const Grid& grid, const Sampled& s, double ds,
                   std::vector<double>& flux) {
  const double dx = grid.dx();
  const std::size_t m = grid.cells;
  flux.assign(m + 1, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    const double u = s.u[i];
    const double adv = u > 0.0 ? u * f[i - 1] : u * f[i];
    const double dif = -0.5 * (s.d[i] * f[i] - s.d[i - 1] * f[i - 1]) / dx;
    flux[i] = adv + dif;
  }
  for (std::size_t i = 0; i < m; ++i) f[i] -= ds / dx * (flux[i + 1] - flux[i]);
}

void check_step(const Grid& grid, const Sampled& s, double ds) {
  if (!(ds >= 0.0)) throw ValidationError("step must be nonnegative");
  if (ds > max_step(grid, s) * (1.0 + 1e-12)) throw ValidationError("CFL condition violated");
}

}  // namespace

double max_fokker_planck_step(const Grid& grid, const FPECoefficients& coeff) {
  return max_step(grid, sample(grid, coeff));
}

GridDensity fokker_planck_step(const GridDensity& f, const FPECoefficients& coeff, double ds) {
  return fokker_planck_evolve(f, coeff, ds, 1);
}

GridDensity fokker_planck_evolve(GridDensity f, const FPECoefficients& coeff, double ds, std::size_t steps) {
  const Sampled s = sample(f.grid, coeff);
  check_step(f.grid, s, ds);
  std::vector<double> flux;
  for (std::size_t k = 0; k < steps; ++k) step_in_place(f.values, f.grid, s, ds, flux);
  return f;
}

}  // namespace kmmc::kinetic
