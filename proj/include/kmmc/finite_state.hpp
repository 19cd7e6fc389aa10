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

// Exact one-step density evolution of the MMC chain on a finite state space.
// Used as the ground truth for the chain mechanics in mmc_step.

#include <cstddef>
#include <span>
#include <vector>

#include "kmmc/rng.hpp"
#include "kmmc/sampler.hpp"

namespace kmmc {

/// Proposal and acceptance matrices over M abstract states.
///
/// Layout is column-major in the conditioning state: tau(to, from) is the
/// probability of proposing `to` from `from`, so each column sums to one.
/// alpha(to, from) is the acceptance rate of that move.
class FiniteStateSpec {
 public:
  FiniteStateSpec(std::size_t states, std::vector<double> proposal, std::vector<double> acceptance);

  /// Random strictly positive column-stochastic tau and alpha in [0, 1].
  static FiniteStateSpec random(std::size_t states, Rng& rng);

  [[nodiscard]] std::size_t size() const noexcept { return states_; }
  [[nodiscard]] double tau(std::size_t to, std::size_t from) const { return proposal_[to * states_ + from]; }
  [[nodiscard]] double alpha(std::size_t to, std::size_t from) const { return acceptance_[to * states_ + from]; }

 private:
  std::size_t states_;
  std::vector<double> proposal_;
  std::vector<double> acceptance_;
};

/// f'(x) = sum_y alpha(x,y) tau(x|y) f(y) + [sum_x' (1 - alpha(x',x)) tau(x'|x)] f(x).
[[nodiscard]] std::vector<double> one_step_density_oracle(const FiniteStateSpec& spec, std::span<const double> f);

/// Adapters that run the finite chain through mmc_step. The state index is
/// carried as the single coordinate of a 1D ParameterPoint.
[[nodiscard]] ProposalKernel finite_state_proposal(const FiniteStateSpec& spec);
[[nodiscard]] AcceptanceRule finite_state_acceptance(const FiniteStateSpec& spec);

/// Draws an index from a probability vector.
[[nodiscard]] std::size_t sample_index(std::span<const double> probabilities, Rng& rng);

}  // namespace kmmc
