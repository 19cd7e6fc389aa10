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

// Particle-versus-grid studies for the two scaling limits of the chain, and
// the detail-balance checks behind them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "kmmc/kinetic/boltzmann.hpp"
#include "kmmc/kinetic/fokker_planck.hpp"
#include "kmmc/kinetic/grid.hpp"
#include "kmmc/rng.hpp"

namespace kmmc::kinetic {

using Density1D = std::function<double(double)>;

/// exp(-(x^2 - 1)^2 / 0.2), unnormalized.
[[nodiscard]] double double_well(double x);

/// N(y, sigma^2) restricted to [lo, hi] and renormalized there.
struct TruncatedGaussian {
  double sigma = 0.5;
  double lo = -2.0;
  double hi = 2.0;

  /// tau(x | y); zero outside [lo, hi].
  [[nodiscard]] double density(double x, double y) const;
  /// Mass of N(y, sigma^2) inside [lo, hi].
  [[nodiscard]] double mass(double y) const;
  /// Rejection sampling from N(y, sigma^2).
  [[nodiscard]] double sample(double y, Rng& rng) const;
};

/// min(1, pi(x) tau(y|x) / (pi(y) tau(x|y))) for a move y -> x.
[[nodiscard]] double metropolis_rate(const Density1D& target, const TruncatedGaussian& tau, double x, double y);

struct ConvergenceRecord {
  double h = 0.0;
  double s = 0.0;
  double l1 = 0.0;
  double noise_floor = 0.0;
  bool pass = false;
};

struct ConvergenceReport {
  std::string regime;
  std::vector<ConvergenceRecord> records;
  /// Steps of the grid evolution where the entropy rose beyond roundoff.
  std::size_t entropy_violations = 0;
  double acceptance_fraction = 0.0;
  bool pass = false;
};

/// Consecutive records pass when the error drops, or when both lie at or
/// below the noise floor.
void mark_monotone(ConvergenceReport& report);

void write_text(std::ostream& os, const ConvergenceReport& report);
void write_csv(std::ostream& os, const ConvergenceReport& report);

/// Jump regime: acceptance h * alpha_scale * (Metropolis rate for `target`),
/// truncated Gaussian proposal, particles started uniformly on
/// [initial_lo, initial_hi].
struct BoltzmannStudy {
  Grid grid{-2.0, 2.0, 100};
  Density1D target = double_well;
  double proposal_sigma = 0.5;
  double alpha_scale = 4.0;
  double initial_lo = -2.0;
  double initial_hi = -1.0;
  std::vector<double> h_list{0.2, 0.1, 0.05};
  double horizon = 1.0;
  std::size_t ensemble = 10'000;
  std::size_t coarse_bins = 10;
  /// Grid time step; clipped to the positivity bound.
  double pde_ds = 1e-3;
  /// Zero selects 3 / sqrt(ensemble).
  double noise_floor = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  [[nodiscard]] TruncatedGaussian proposal() const { return {proposal_sigma, grid.lo, grid.hi}; }
  /// Kernel alpha_scale * alpha_MH * tau on the grid (the h -> 0 limit operator).
  [[nodiscard]] KernelGrid kernel() const;
  [[nodiscard]] double floor() const;
};

[[nodiscard]] ConvergenceReport verify_boltzmann_limit(const BoltzmannStudy& study);

/// Coarse-bin L1 distance between the particle density after horizon/h steps
/// and the stationary density of the study kernel.
[[nodiscard]] double boltzmann_stationary_distance(const BoltzmannStudy& study, double h, double horizon);

/// Diffusive regime: increments x + h E(x) + sqrt(h) sigma(x) N(0, 1),
/// accepted with probability 1 - beta(x_p); particles start from
/// N(initial_mean, initial_sd^2).
struct BrownianStudy {
  Grid grid{-4.0, 4.0, 800};
  FPECoefficients coeff{[](double x) { return -x; }};
  double initial_mean = 1.5;
  double initial_sd = 0.2;
  std::vector<double> h_list{0.2, 0.1, 0.05};
  double horizon = 1.0;
  std::size_t ensemble = 10'000;
  std::size_t coarse_bins = 10;
  double noise_floor = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  [[nodiscard]] double floor() const;
};

[[nodiscard]] ConvergenceReport verify_brownian_limit(const BrownianStudy& study);

struct ParticleMoment {
  double s = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Ensemble mean and variance of the diffusive-regime particles started at
/// x0, recorded after each entry of `steps`.
[[nodiscard]] std::vector<ParticleMoment> brownian_particle_moments(const BrownianStudy& study, double h, double x0,
                                                                    const std::vector<std::int64_t>& steps);

/// Variance growth rate of the grid solver from a narrow Gaussian at the
/// domain center, measured over `steps` steps of the largest stable size.
[[nodiscard]] double fokker_planck_variance_rate(const Grid& grid, const FPECoefficients& coeff, double initial_sd,
                                                 std::size_t steps);

struct InvariantCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct EntropyStudy {
  Grid grid{-2.0, 2.0, 100};
  Density1D target = double_well;
  double proposal_sigma = 0.5;
  double initial_lo = -2.0;
  double initial_hi = -1.0;
  std::size_t steps = 10'000;
};

struct EntropyResult {
  std::size_t violations = 0;
  /// Largest H_{k+1} - H_k relative to H_k.
  double max_relative_increase = 0.0;
  double final_l1 = 0.0;
  double ds = 0.0;
  std::vector<double> entropy;
};

/// Grid jump evolution with the Metropolis kernel for `target` at the largest
/// admissible step, tracking H(f_k, f_inf) at every step. An increase counts
/// as a violation when it exceeds 1e-12 relative to H_k.
[[nodiscard]] EntropyResult entropy_study(const EntropyStudy& study);

struct ChainHistogramStudy {
  Density1D target = double_well;
  double lo = -2.0;
  double hi = 2.0;
  double proposal_sigma = 0.5;
  std::int64_t samples = 200'000;
  std::int64_t burn_in = 1000;
  std::size_t bins = 40;
  std::uint64_t seed = 0;
};

/// Total-variation distance between the post-burn-in histogram of one
/// Metropolis-Hastings chain and the target's cell probabilities.
[[nodiscard]] double chain_total_variation(const ChainHistogramStudy& study);

/// Cell probabilities of an unnormalized density by composite Simpson quadrature.
[[nodiscard]] std::vector<double> cell_probabilities(const Density1D& density, const std::vector<double>& edges);

/// The invariants of the detail-balance construction on the double-well problem.
[[nodiscard]] std::vector<InvariantCheck> detail_balance_suite(std::uint64_t seed);

}  // namespace kmmc::kinetic
