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

// Micro-macro splitting of the MMC chain.
//
// Each iteration draws the proposal either from the particle (micro) kernel
// or from a Gaussian built on the running moments of the macro branch. The
// split probability zeta is driven by the balance between data variance,
// macro variance and chain variance.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kmmc/point.hpp"
#include "kmmc/rng.hpp"
#include "kmmc/sampler.hpp"
#include "kmmc/strategies.hpp"

namespace kmmc {

/// Componentwise Gaussian ansatz for the bulk.
struct MacroState {
  std::vector<double> mean;
  std::vector<double> var;
  std::int64_t sample_count = 0;

  static MacroState empty(std::size_t dim);
  /// Batch mean and population variance of `samples`.
  static MacroState from_samples(std::span<const ParameterPoint> samples);

  [[nodiscard]] std::size_t dim() const noexcept { return mean.size(); }
  [[nodiscard]] double max_variance() const;
};

struct ZetaUpdate {
  double zeta = 0.0;
  /// (sigma_nu^2 - var_macro) / sigma_n^2; NaN when the chain variance is degenerate.
  double r = 0.0;
  bool degenerate = false;
};

/// clamp(sqrt(r), 0, 1) for r > 0, otherwise zeta_prev. A nonpositive chain
/// variance keeps zeta_prev and sets `degenerate`.
[[nodiscard]] ZetaUpdate update_zeta(double sigma_nu_sq, double var_macro, double sigma_n_sq, double zeta_prev);

enum class Branch : std::uint8_t { micro = 0, macro = 1 };

/// micro iff u < zeta_prev with u ~ U[0, 1).
[[nodiscard]] Branch select_branch(double zeta_prev, Rng& rng);

/// project_box(Z), Z_i ~ N(mean_i, var_i); independent of the current point.
[[nodiscard]] ParameterPoint macro_proposal(const MacroState& macro, const ProjectionBox& box, Rng& rng);

/// Running-moment update of the macro mean and variance with one kept point.
[[nodiscard]] MacroState update_macro_moments(const MacroState& macro, const ParameterPoint& x_kept);

struct SplitState {
  double zeta = 0.5;
  MacroState macro;
  double sigma_nu_sq = 0.0;
  double sigma_n_sq = 0.0;
};

struct ZetaRecord {
  std::int64_t iter = 0;
  double zeta = 0.0;
  double r = 0.0;
};

struct MicroMacroConfig {
  ChainConfig chain;
  double zeta0 = 0.5;
  /// When set, zeta is pinned to this value for the whole run.
  std::optional<double> forced_zeta;
  ProjectionBox box;

  void validate() const;
};

struct MicroMacroRecord {
  ChainRecord chain;
  std::vector<Branch> branches;
  std::vector<ZetaRecord> zeta_history;
  SplitState final_split;

  [[nodiscard]] double macro_fraction() const;
};

/// sigma_nu^2 available at a given 1-based step.
using DataVariance = std::function<double(std::int64_t step)>;

/// Runs the micro-macro chain.
///
/// Iteration n (1-based): zeta_n is computed from sigma_nu^2(n), the macro
/// variance before the step and the chain variance of kappa_{n-1}; the branch
/// is then chosen with zeta_{n-1}. Branch draws use their own stream
/// Rng(seed, streams::branch), so with zeta pinned to 1 the chain is the same
/// as run_chain with the micro kernel. Points kept on macro iterations update
/// the macro moments.
[[nodiscard]] MicroMacroRecord run_micromacro_chain(const MicroMacroConfig& config, const ProposalKernel& micro,
                                                    const AcceptanceRule& acceptance, const InitialSampler& initial,
                                                    const MacroState& macro0, const DataVariance& data_variance);

}  // namespace kmmc
