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

#include "kmmc/finite_state.hpp"

#include <cmath>
#include <memory>
#include <numeric>

#include "kmmc/error.hpp"

namespace kmmc {

namespace {
constexpr double kStochasticTol = 1e-12;
}

FiniteStateSpec::FiniteStateSpec(std::size_t states, std::vector<double> proposal, std::vector<double> acceptance)
    : states_(states), proposal_(std::move(proposal)), acceptance_(std::move(acceptance)) {
  if (states_ == 0) throw ValidationError("finite state space must be nonempty");
  if (proposal_.size() != states_ * states_ || acceptance_.size() != states_ * states_)
    throw ValidationError("matrix size does not match state count");
  for (std::size_t from = 0; from < states_; ++from) {
    double sum = 0.0;
    for (std::size_t to = 0; to < states_; ++to) {
      if (tau(to, from) < 0.0) throw ValidationError("proposal matrix has a negative entry");
      sum += tau(to, from);
    }
    if (std::abs(sum - 1.0) > kStochasticTol) throw ValidationError("proposal matrix is not stochastic");
  }
  for (double a : acceptance_)
    if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("acceptance matrix entry outside [0,1]");
}

FiniteStateSpec FiniteStateSpec::random(std::size_t states, Rng& rng) {
  std::vector<double> tau(states * states);
  std::vector<double> alpha(states * states);
  for (std::size_t from = 0; from < states; ++from) {
    double sum = 0.0;
    for (std::size_t to = 0; to < states; ++to) {
      tau[to * states + from] = 0.05 + rng.uniform();
      sum += tau[to * states + from];
    }
    for (std::size_t to = 0; to < states; ++to) tau[to * states + from] /= sum;
  }
  for (double& a : alpha) a = rng.uniform();
  return FiniteStateSpec(states, std::move(tau), std::move(alpha));
}

std::vector<double> one_step_density_oracle(const FiniteStateSpec& spec, std::span<const double> f) {
  const std::size_t m = spec.size();
  if (f.size() != m) throw ValidationError("density size does not match state count");
  double mass = 0.0;
  for (double v : f) {
    if (v < 0.0) throw ValidationError("density has a negative entry");
    mass += v;
  }
  if (std::abs(mass - 1.0) > kStochasticTol) throw ValidationError("density does not sum to one");

  std::vector<double> next(m, 0.0);
  for (std::size_t x = 0; x < m; ++x) {
    double moved_in = 0.0;
    for (std::size_t y = 0; y < m; ++y) moved_in += spec.alpha(x, y) * spec.tau(x, y) * f[y];
    double rejected = 0.0;
    for (std::size_t xp = 0; xp < m; ++xp) rejected += (1.0 - spec.alpha(xp, x)) * spec.tau(xp, x);
    next[x] = moved_in + rejected * f[x];
  }
  return next;
}

std::size_t sample_index(std::span<const double> probabilities, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) return i;
  }
  return probabilities.size() - 1;
}

namespace {
std::size_t state_of(const ParameterPoint& p, std::size_t m) {
  const auto i = static_cast<std::size_t>(std::lround(p[0]));
  if (p.size() != 1 || i >= m) throw Error("point is not a finite-state index");
  return i;
}
}  // namespace

ProposalKernel finite_state_proposal(const FiniteStateSpec& spec) {
  auto shared = std::make_shared<const FiniteStateSpec>(spec);
  const std::size_t m = spec.size();
  // Precompute columns so sampling is a single cumulative scan.
  auto columns = std::make_shared<std::vector<std::vector<double>>>(m, std::vector<double>(m));
  for (std::size_t from = 0; from < m; ++from)
    for (std::size_t to = 0; to < m; ++to) (*columns)[from][to] = spec.tau(to, from);

  return ProposalKernel(
      ProposalKind::custom,
      [columns, m](const ProposalContext& ctx, Rng& rng) {
        const std::size_t from = state_of(ctx.current, m);
        return ParameterPoint{static_cast<double>(sample_index((*columns)[from], rng))};
      },
      [shared, m](const ParameterPoint& to, const ParameterPoint& from) {
        return shared->tau(state_of(to, m), state_of(from, m));
      });
}

AcceptanceRule finite_state_acceptance(const FiniteStateSpec& spec) {
  auto shared = std::make_shared<const FiniteStateSpec>(spec);
  return {AcceptanceKind::custom, [shared](const AcceptanceContext& ctx) {
            const std::size_t m = shared->size();
            return shared->alpha(state_of(ctx.proposal, m), state_of(ctx.current, m));
          }};
}

}  // namespace kmmc
