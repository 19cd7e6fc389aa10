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

// Independent-chain ensembles. simulate_ensemble distributes chains over
// OpenMP threads; simulate_ensemble_serial is the single-threaded reference
// kept for testing. Chain i always draws from Rng(seed, ensemble_base + i), so
// both produce bitwise-identical results for any thread count.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kmmc/sampler.hpp"

namespace kmmc {

struct EnsembleSpec {
  std::size_t chains = 10'000;
  /// Step counts at which every chain's position is recorded, ascending.
  std::vector<std::int64_t> snapshot_steps;
  std::uint64_t seed = 0;
  int max_retries = kDefaultMaxRetries;

  void validate() const;
};

struct EnsembleResult {
  /// snapshots[k][i]: chain i after snapshot_steps[k] steps.
  std::vector<std::vector<ParameterPoint>> snapshots;
  std::int64_t accepted = 0;
  std::int64_t steps = 0;

  [[nodiscard]] double acceptance_fraction() const {
    return steps > 0 ? static_cast<double>(accepted) / static_cast<double>(steps) : 0.0;
  }
};

/// The proposal, acceptance, and initial sampler must be safe to call
/// concurrently (stateless apart from the Rng they are handed).
[[nodiscard]] EnsembleResult simulate_ensemble(const EnsembleSpec& spec, const ProposalKernel& proposal,
                                               const AcceptanceRule& acceptance, const InitialSampler& initial);

[[nodiscard]] EnsembleResult simulate_ensemble_serial(const EnsembleSpec& spec, const ProposalKernel& proposal,
                                                      const AcceptanceRule& acceptance,
                                                      const InitialSampler& initial);

/// Coordinate 0 of every point in a snapshot.
[[nodiscard]] std::vector<double> first_coordinates(const std::vector<ParameterPoint>& snapshot);

}  // namespace kmmc
