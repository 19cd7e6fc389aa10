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

// Grid-level micro-macro splitting of the jump equation. With Q the operator
// of boltzmann_step and f = zeta f_micro + (1 - zeta) f_macro:
//
//   d/ds f_micro = Q[gamma f_micro + (1 - gamma) f_macro]
//   d/ds f_macro = Q[zeta (1 - gamma)/(1 - zeta) f_micro
//                    + (1 - 2 zeta + zeta gamma)/(1 - zeta) f_macro]
//                  - zeta'/(1 - zeta) (f_micro - f_macro)
//
// Both parts are advanced with explicit Euler.

#include <cstddef>
#include <functional>
#include <vector>

#include "kmmc/kinetic/boltzmann.hpp"
#include "kmmc/kinetic/grid.hpp"

namespace kmmc::kinetic {

/// gamma is either a fixed number or follows zeta(s).
struct GammaChoice {
  double value = 1.0;
  bool follow_zeta = false;

  static GammaChoice constant(double g) { return {g, false}; }
  static GammaChoice zeta() { return {0.0, true}; }
  [[nodiscard]] double at(double zeta) const { return follow_zeta ? zeta : value; }
};

struct ZetaPath {
  std::function<double(double)> zeta;
  std::function<double(double)> derivative;

  static ZetaPath constant(double z);
  static ZetaPath linear(double z0, double slope);
};

struct MicroMacroGridResult {
  /// Entry k holds the state after k steps; index 0 is the initial data.
  std::vector<GridDensity> micro;
  std::vector<GridDensity> macro;
  std::vector<GridDensity> combined;
  std::vector<double> times;
};

/// Throws Error("splitting degenerate") as soon as zeta(s) leaves (0, 1).
[[nodiscard]] MicroMacroGridResult solve_micromacro_grid(const KernelGrid& q, GammaChoice gamma, const ZetaPath& path,
                                                         const GridDensity& f_micro0, const GridDensity& f_macro0,
                                                         double ds, std::size_t steps);

/// Unsplit explicit Euler evolution with the same step, for comparison.
[[nodiscard]] std::vector<GridDensity> boltzmann_evolve(const GridDensity& f0, const KernelGrid& q, double ds,
                                                        std::size_t steps);

}  // namespace kmmc::kinetic
