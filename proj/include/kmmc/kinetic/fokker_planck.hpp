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

// Conservative finite-volume solver for the drift-diffusion limit
//
//   d/ds f = d/dx[ (E (beta - 1) + sigma^2 beta') f ] + 1/2 d2/dx2[ D f ],
//
// with D = sigma^2 (1 + beta) by default. The drift is upwinded at the faces,
// the diffusion flux uses central differences of D f, and both domain ends
// carry zero flux.

#include <functional>

#include "kmmc/kinetic/grid.hpp"

namespace kmmc::kinetic {

enum class RejectionDiffusion {
  /// D = sigma^2 (1 + beta).
  one_plus_beta,
  /// D = sigma^2 (1 - beta): the diffusion actually produced by a chain whose
  /// increments are accepted with probability 1 - beta.
  particle_consistent,
};

struct FPECoefficients {
  std::function<double(double)> drift = [](double) { return 0.0; };
  std::function<double(double)> sigma = [](double) { return 1.0; };
  /// beta(x) = beta(x, x) on the diagonal, values in [0, 1].
  std::function<double(double)> beta = [](double) { return 0.0; };
  /// First-slot gradient of beta on the diagonal.
  std::function<double(double)> beta_grad = [](double) { return 0.0; };
  RejectionDiffusion diffusion = RejectionDiffusion::one_plus_beta;

  /// Advection velocity E (1 - beta) - sigma^2 beta'.
  [[nodiscard]] double velocity(double x) const;
  /// Diffusion coefficient D(x).
  [[nodiscard]] double diffusivity(double x) const;
};

/// Largest stable step: min(0.4 dx^2 / max D, 0.5 dx / max |u|) over the grid.
[[nodiscard]] double max_fokker_planck_step(const Grid& grid, const FPECoefficients& coeff);

/// One explicit Euler step. Throws ValidationError on a CFL violation or on
/// coefficients outside their ranges (sigma <= 0, beta outside [0, 1]).
[[nodiscard]] GridDensity fokker_planck_step(const GridDensity& f, const FPECoefficients& coeff, double ds);

/// Advances by `steps` steps of size ds, validating coefficients once.
[[nodiscard]] GridDensity fokker_planck_evolve(GridDensity f, const FPECoefficients& coeff, double ds,
                                               std::size_t steps);

}  // namespace kmmc::kinetic
