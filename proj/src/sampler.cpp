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

#include "kmmc/sampler.hpp"

#include <algorithm>
#include <string>

#include "kmmc/error.hpp"

namespace kmmc {

ProposalKernel::ProposalKernel(ProposalKind kind, Sampler sampler, Density density)
    : kind_(kind), sampler_(std::move(sampler)), density_(std::move(density)) {
  if (!sampler_) throw ValidationError("proposal kernel requires a sampler");
}

double ProposalKernel::density(const ParameterPoint& to, const ParameterPoint& from) const {
  if (!density_) throw Error("proposal kernel has no density");
  return density_(to, from);
}

AcceptanceRule constant_acceptance(double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw ValidationError("invalid acceptance value");
  return {AcceptanceKind::constant, [value](const AcceptanceContext&) { return value; }};
}

ChainState ChainState::start(ParameterPoint x0, Rng rng) {
  if (!x0.all_finite()) throw ValidationError("invalid parameter");
  ChainState s{std::move(x0), {}, 0, std::move(rng), 0, 0};
  s.moments = MomentVector::zero(s.current.size());
  return s;
}

StepResult mmc_step(ChainState& state, const ProposalKernel& proposal, const AcceptanceRule& acceptance,
                    int max_retries) {
  const std::int64_t step = state.iteration + 1;
  const ProposalContext pctx{state.current, state.moments, step};
  MomentVector stay = update_moments(state.current, state.moments);

  StepResult result;
  for (;;) {
    ParameterPoint xp = proposal.sample(pctx, state.rng);
    if (xp.size() != state.current.size()) throw Error("proposal dimension mismatch");
    MomentVector move = update_moments(xp, state.moments);

    double alpha = 0.0;
    try {
      alpha = acceptance(AcceptanceContext{xp, move, state.current, stay, step});
    } catch (const ModelEvaluationError&) {
      if (++result.retries > max_retries) throw Error("proposal region exhausted");
      continue;
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("invalid acceptance value");

    result.accepted = state.rng.uniform() < alpha;
    if (result.accepted) {
      state.current = std::move(xp);
      state.moments = std::move(move);
      ++state.accept_count;
    } else {
      state.moments = std::move(stay);
    }
    ++state.iteration;
    return result;
  }
}

void ChainConfig::validate() const {
  if (total_steps <= 0) throw ValidationError("N must be positive");
  if (burn_in < 0) throw ValidationError("burn_in must be nonnegative");
  if (burn_in > total_steps) throw ValidationError("burn_in must not exceed N");
  if (max_retries < 0) throw ValidationError("max_retries must be nonnegative");
}

std::span<const ParameterPoint> ChainRecord::kept() const {
  const auto skip = static_cast<std::size_t>(std::clamp<std::int64_t>(burn_in, 0, std::ssize(samples)));
  return std::span<const ParameterPoint>(samples).subspan(skip);
}

double ChainRecord::acceptance_fraction() const {
  if (accepted.empty()) return 0.0;
  return static_cast<double>(std::count(accepted.begin(), accepted.end(), std::uint8_t{1})) /
         static_cast<double>(accepted.size());
}

ChainRecord run_chain(const ChainConfig& config, const ProposalKernel& proposal, const AcceptanceRule& acceptance,
                      const InitialSampler& initial) {
  config.validate();
  Rng rng(config.seed, streams::chain);
  ParameterPoint x0 = initial(rng);
  ChainState state = ChainState::start(std::move(x0), std::move(rng));

  ChainRecord record;
  record.burn_in = config.burn_in;
  record.samples.reserve(static_cast<std::size_t>(config.total_steps));
  record.accepted.reserve(static_cast<std::size_t>(config.total_steps));
  for (std::int64_t n = 0; n < config.total_steps; ++n) {
    const StepResult r = mmc_step(state, proposal, acceptance, config.max_retries);
    record.samples.push_back(state.current);
    record.accepted.push_back(r.accepted ? 1 : 0);
  }
  record.final_moments = state.moments;
  return record;
}

}  // namespace kmmc
