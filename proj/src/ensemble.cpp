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

#include "kmmc/ensemble.hpp"

#include <exception>
#include <mutex>

#include "kmmc/error.hpp"

namespace kmmc {

void EnsembleSpec::validate() const {
  if (chains == 0) throw ValidationError("ensemble must contain at least one chain");
  if (snapshot_steps.empty()) throw ValidationError("ensemble needs at least one snapshot step");
  std::int64_t prev = -1;
  for (auto s : snapshot_steps) {
    if (s < 0 || s <= prev) throw ValidationError("snapshot steps must be nonnegative and increasing");
    prev = s;
  }
}

namespace {

EnsembleResult allocate(const EnsembleSpec& spec) {
  EnsembleResult out;
  out.snapshots.assign(spec.snapshot_steps.size(), std::vector<ParameterPoint>(spec.chains));
  return out;
}

// Runs chain i and writes its snapshots; returns the accepted-step count.
std::int64_t run_member(std::size_t i, const EnsembleSpec& spec, const ProposalKernel& proposal,
                        const AcceptanceRule& acceptance, const InitialSampler& initial, EnsembleResult& out) {
  Rng rng(spec.seed, streams::ensemble_base + i);
  ParameterPoint x0 = initial(rng);
  ChainState state = ChainState::start(std::move(x0), std::move(rng));
  std::size_t next = 0;
  while (next < spec.snapshot_steps.size()) {
    if (state.iteration == spec.snapshot_steps[next]) {
      out.snapshots[next][i] = state.current;
      ++next;
      continue;
    }
    mmc_step(state, proposal, acceptance, spec.max_retries);
  }
  return state.accept_count;
}

}  // namespace

EnsembleResult simulate_ensemble(const EnsembleSpec& spec, const ProposalKernel& proposal,
                                 const AcceptanceRule& acceptance, const InitialSampler& initial) {
  spec.validate();
  EnsembleResult out = allocate(spec);
  const auto n = static_cast<std::int64_t>(spec.chains);
  std::int64_t accepted = 0;
  std::exception_ptr failure;
  std::mutex failure_mutex;

#pragma omp parallel for schedule(static) reduction(+ : accepted)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      accepted += run_member(static_cast<std::size_t>(i), spec, proposal, acceptance, initial, out);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  out.accepted = accepted;
  out.steps = n * spec.snapshot_steps.back();
  return out;
}

EnsembleResult simulate_ensemble_serial(const EnsembleSpec& spec, const ProposalKernel& proposal,
                                        const AcceptanceRule& acceptance, const InitialSampler& initial) {
  spec.validate();
  EnsembleResult out = allocate(spec);
  for (std::size_t i = 0; i < spec.chains; ++i)
    out.accepted += run_member(i, spec, proposal, acceptance, initial, out);
  out.steps = static_cast<std::int64_t>(spec.chains) * spec.snapshot_steps.back();
  return out;
}

std::vector<double> first_coordinates(const std::vector<ParameterPoint>& snapshot) {
  std::vector<double> out;
  out.reserve(snapshot.size());
  for (const auto& p : snapshot) out.push_back(p[0]);
  return out;
}

}  // namespace kmmc
