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

// Grid solver for the jump (Boltzmann-type) limit of the MMC chain with
// state-only acceptance and proposal:
//
//   d/ds f(x) = sum_y K(x,y) f(y) dy - f(x) sum_y K(y,x) dy,
//   K(x,y) = alpha(x,y) tau(x|y).
//
// apply_generator runs rows in parallel with OpenMP; apply_generator_serial is
// the single-threaded reference.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kmmc/kinetic/grid.hpp"

namespace kmmc::kinetic {

class KernelGrid {
 public:
  /// `values` is row-major: values[i * M + j] = K(x_i, x_j).
  KernelGrid(Grid grid, std::vector<double> values);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t size() const noexcept { return grid_.cells; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return values_[i * grid_.cells + j]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  /// Loss rate of cell j: sum_i K(x_i, x_j) dx.
  [[nodiscard]] double loss(std::size_t j) const { return loss_[j]; }
  [[nodiscard]] double max_loss() const noexcept { return max_loss_; }
  [[nodiscard]] KernelGrid scaled(double factor) const;

 private:
  Grid grid_;
  std::vector<double> values_;
  std::vector<double> loss_;
  double max_loss_ = 0.0;
};

using AcceptanceFn = std::function<double(double x, double y)>;
/// tau(x | y).
using ProposalDensityFn = std::function<double(double x, double y)>;

/// Midpoint evaluation of alpha(x_i, x_j) tau(x_i | x_j). Throws
/// ValidationError("proposal density not normalized on grid") when some
/// column of tau does not integrate to one within 1e-3.
[[nodiscard]] KernelGrid build_kernel(const AcceptanceFn& alpha, const ProposalDensityFn& tau, const Grid& grid);

/// 0.9 / max_j loss(j); infinity for a zero kernel.
[[nodiscard]] double max_boltzmann_step(const KernelGrid& k);

/// Right-hand side Q[f] of the jump equation.
[[nodiscard]] std::vector<double> apply_generator(const KernelGrid& k, std::span<const double> f);
[[nodiscard]] std::vector<double> apply_generator_serial(const KernelGrid& k, std::span<const double> f);

/// One explicit Euler step. Throws ValidationError("step too large") above max_boltzmann_step.
[[nodiscard]] GridDensity boltzmann_step(const GridDensity& f, const KernelGrid& k, double ds);

/// Normalized positive f_inf with zero net flux. Detail-balanced kernels are
/// solved by chaining the pairwise balance ratios in log space, which keeps
/// full relative accuracy in cells where f_inf is tiny; other irreducible
/// kernels fall back to a dense null-vector solve. Throws
/// Error("no unique stationary density") for a reducible kernel.
[[nodiscard]] GridDensity stationary_detail_balance(const KernelGrid& k);

/// Largest |K(x,y) f(y) - K(y,x) f(x)| over all pairs, relative to the larger flux.
[[nodiscard]] double detail_balance_residual(const KernelGrid& k, const GridDensity& f);

/// H = sum f^2 / f_inf dx. Throws ValidationError when f_inf has a nonpositive cell.
[[nodiscard]] double entropy(const GridDensity& f, const GridDensity& f_inf);

}  // namespace kmmc::kinetic
