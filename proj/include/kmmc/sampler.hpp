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

// Moment-augmented Metropolis Monte Carlo: one chain, one step at a time.
//
// A step draws a proposal x_p from the kernel given (x_n, kappa_n), evaluates
// the acceptance rate with the candidate moment updates for both outcomes, and
// keeps either x_p or another copy of x_n. The moments are then advanced with
// whichever point was kept, so kappa_n is always the running average of
// (x_j, x_j^2) over the recorded history.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kmmc/moments.hpp"
#include "kmmc/point.hpp"
#include "kmmc/rng.hpp"

namespace kmmc {

inline constexpr int kDefaultMaxRetries = 100;
inline constexpr std::int64_t kDefaultBurnIn = 1000;

/// What the proposal kernel sees when drawing x_p.
struct ProposalContext {
  const ParameterPoint& current;
  const MomentVector& moments;
  /// 1-based index of the step being taken.
  std::int64_t step;
};

enum class ProposalKind { gaussian, gradient, macro, custom };

/// Proposal distribution tau(. | x_n, kappa_n).
class ProposalKernel {
 public:
  using Sampler = std::function<ParameterPoint(const ProposalContext&, Rng&)>;
  /// Density tau(to | from); optional, required only by Metropolis-Hastings acceptance.
  using Density = std::function<double(const ParameterPoint& to, const ParameterPoint& from)>;

  ProposalKernel(ProposalKind kind, Sampler sampler, Density density = {});

  [[nodiscard]] ParameterPoint sample(const ProposalContext& ctx, Rng& rng) const { return sampler_(ctx, rng); }
  [[nodiscard]] bool has_density() const noexcept { return static_cast<bool>(density_); }
  [[nodiscard]] double density(const ParameterPoint& to, const ParameterPoint& from) const;
  [[nodiscard]] ProposalKind kind() const noexcept { return kind_; }

 private:
  ProposalKind kind_;
  Sampler sampler_;
  Density density_;
};

/// Inputs to alpha(x_p, omega(x_p, kappa), x_n, omega(x_n, kappa)).
struct AcceptanceContext {
  const ParameterPoint& proposal;
  const MomentVector& proposal_moments;
  const ParameterPoint& current;
  const MomentVector& current_moments;
  /// 1-based index of the step being taken.
  std::int64_t step;
};

enum class AcceptanceKind { likelihood_ratio, metropolis_hastings, constant, custom };

class AcceptanceRule {
 public:
  using Rate = std::function<double(const AcceptanceContext&)>;

  AcceptanceRule(AcceptanceKind kind, Rate rate) : kind_(kind), rate_(std::move(rate)) {}

  [[nodiscard]] double operator()(const AcceptanceContext& ctx) const { return rate_(ctx); }
  [[nodiscard]] AcceptanceKind kind() const noexcept { return kind_; }

 private:
  AcceptanceKind kind_;
  Rate rate_;
};

/// alpha == value for every input.
[[nodiscard]] AcceptanceRule constant_acceptance(double value);

struct ChainState {
  ParameterPoint current;
  MomentVector moments;
  std::int64_t iteration = 0;
  Rng rng;
  std::int64_t accept_count = 0;
  std::int64_t macro_count = 0;

  static ChainState start(ParameterPoint x0, Rng rng);
};

struct StepResult {
  bool accepted = false;
  /// Proposals discarded because the model could not be evaluated.
  int retries = 0;
};

/// Advances the chain by one MMC step in place.
///
/// A ModelEvaluationError raised while evaluating the acceptance rate discards
/// the proposal and draws a fresh one; after `max_retries` such failures the
/// step throws Error("proposal region exhausted"). An acceptance rate outside
/// [0, 1] throws Error("invalid acceptance value").
StepResult mmc_step(ChainState& state, const ProposalKernel& proposal, const AcceptanceRule& acceptance,
                    int max_retries = kDefaultMaxRetries);

struct ChainConfig {
  std::int64_t total_steps = 10'000;
  std::int64_t burn_in = kDefaultBurnIn;
  std::uint64_t seed = 0;
  int max_retries = kDefaultMaxRetries;

  void validate() const;
};

struct ChainRecord {
  /// x_1 .. x_N, one entry per step.
  std::vector<ParameterPoint> samples;
  std::vector<std::uint8_t> accepted;
  std::int64_t burn_in = 0;
  MomentVector final_moments;

  /// Samples after the burn-in prefix.
  [[nodiscard]] std::span<const ParameterPoint> kept() const;
  [[nodiscard]] double acceptance_fraction() const;

  friend bool operator==(const ChainRecord&, const ChainRecord&) = default;
};

using InitialSampler = std::function<ParameterPoint(Rng&)>;

/// Runs config.total_steps MMC steps from one draw of `initial`.
/// Deterministic in config.seed: the chain uses Rng(seed, streams::chain).
[[nodiscard]] ChainRecord run_chain(const ChainConfig& config, const ProposalKernel& proposal,
                                    const AcceptanceRule& acceptance, const InitialSampler& initial);

}  // namespace kmmc
