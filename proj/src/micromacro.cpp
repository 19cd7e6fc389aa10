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

#include "kmmc/micromacro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kmmc/error.hpp"

namespace kmmc {

MacroState MacroState::empty(std::size_t dim) {
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0), 0};
}

MacroState MacroState::from_samples(std::span<const ParameterPoint> samples) {
  if (samples.empty()) throw ValidationError("macro state needs at least one sample");
  const std::size_t dim = samples.front().size();
  MacroState m = empty(dim);
  for (const auto& x : samples) {
    if (x.size() != dim) throw ValidationError("sample dimensions differ");
    m = update_macro_moments(m, x);
  }
  return m;
}

double MacroState::max_variance() const { return var.empty() ? 0.0 : *std::max_element(var.begin(), var.end()); }

ZetaUpdate update_zeta(double sigma_nu_sq, double var_macro, double sigma_n_sq, double zeta_prev) {
  if (!(zeta_prev >= 0.0 && zeta_prev <= 1.0)) throw ValidationError("zeta must lie in [0, 1]");
  if (!(sigma_n_sq > 0.0)) return {zeta_prev, std::numeric_limits<double>::quiet_NaN(), true};
  const double r = (sigma_nu_sq - var_macro) / sigma_n_sq;
  if (r > 0.0) return {std::clamp(std::sqrt(r), 0.0, 1.0), r, false};
  return {zeta_prev, r, false};
}

Branch select_branch(double zeta_prev, Rng& rng) { return rng.uniform() < zeta_prev ? Branch::micro : Branch::macro; }

ParameterPoint macro_proposal(const MacroState& macro, const ProjectionBox& box, Rng& rng) {
  ParameterPoint z(macro.dim());
  for (std::size_t i = 0; i < macro.dim(); ++i) {
    if (!(macro.var[i] >= 0.0)) throw ValidationError("macro variance must be nonnegative");
    z[i] = rng.normal(macro.mean[i], std::sqrt(macro.var[i]));
  }
  return project_box(z, box);
}

MacroState update_macro_moments(const MacroState& macro, const ParameterPoint& x_kept) {
  if (!x_kept.all_finite()) throw ValidationError("invalid parameter");
  if (x_kept.size() != macro.dim()) throw ValidationError("macro state dimension mismatch");
  const auto n = static_cast<double>(macro.sample_count);
  MacroState out = macro;
  for (std::size_t i = 0; i < macro.dim(); ++i) {
    const double second = macro.var[i] + macro.mean[i] * macro.mean[i];
    const double mean = (x_kept[i] + n * macro.mean[i]) / (n + 1.0);
    const double second_new = (x_kept[i] * x_kept[i] + n * second) / (n + 1.0);
    out.mean[i] = mean;
    out.var[i] = std::max(0.0, second_new - mean * mean);
  }
  ++out.sample_count;
  return out;
}

void MicroMacroConfig::validate() const {
  chain.validate();
  box.validate();
  if (!(zeta0 >= 0.0 && zeta0 <= 1.0)) throw ValidationError("zeta0 must lie in [0, 1]");
  if (forced_zeta && !(*forced_zeta >= 0.0 && *forced_zeta <= 1.0))
    throw ValidationError("forced zeta must lie in [0, 1]");
}

double MicroMacroRecord::macro_fraction() const {
  if (branches.empty()) return 0.0;
  return static_cast<double>(std::count(branches.begin(), branches.end(), Branch::macro)) /
         static_cast<double>(branches.size());
}

MicroMacroRecord run_micromacro_chain(const MicroMacroConfig& config, const ProposalKernel& micro,
                                      const AcceptanceRule& acceptance, const InitialSampler& initial,
                                      const MacroState& macro0, const DataVariance& data_variance) {
  config.validate();
  if (macro0.dim() != config.box.size()) throw ValidationError("macro state dimension mismatch");

  Rng rng(config.chain.seed, streams::chain);
  Rng branch_rng(config.chain.seed, streams::branch);
  ParameterPoint x0 = initial(rng);
  ChainState state = ChainState::start(std::move(x0), std::move(rng));

  SplitState split;
  split.zeta = config.forced_zeta.value_or(config.zeta0);
  split.macro = macro0;

  const ProposalKernel macro_kernel(
      ProposalKind::macro,
      [&split, &box = config.box](const ProposalContext&, Rng& r) { return macro_proposal(split.macro, box, r); });

  MicroMacroRecord out;
  auto& rec = out.chain;
  rec.burn_in = config.chain.burn_in;
  const auto total = static_cast<std::size_t>(config.chain.total_steps);
  rec.samples.reserve(total);
  rec.accepted.reserve(total);
  out.branches.reserve(total);
  out.zeta_history.reserve(total);

  for (std::int64_t n = 1; n <= config.chain.total_steps; ++n) {
    const double zeta_prev = split.zeta;
    split.sigma_nu_sq = data_variance ? data_variance(n) : 0.0;
    split.sigma_n_sq = state.moments.max_variance();
    double r = std::numeric_limits<double>::quiet_NaN();
    if (config.forced_zeta) {
      split.zeta = *config.forced_zeta;
    } else {
      const ZetaUpdate z = update_zeta(split.sigma_nu_sq, split.macro.max_variance(), split.sigma_n_sq, zeta_prev);
      split.zeta = z.zeta;
      r = z.r;
    }
    out.zeta_history.push_back({n, split.zeta, r});

    const Branch branch = select_branch(zeta_prev, branch_rng);
    const ProposalKernel& kernel = branch == Branch::micro ? micro : macro_kernel;
    const StepResult step = mmc_step(state, kernel, acceptance, config.chain.max_retries);
    if (branch == Branch::macro) {
      ++state.macro_count;
      split.macro = update_macro_moments(split.macro, state.current);
    }
    rec.samples.push_back(state.current);
    rec.accepted.push_back(step.accepted ? 1 : 0);
    out.branches.push_back(branch);
  }
  rec.final_moments = state.moments;
  out.final_split = split;
  return out;
}

}  // namespace kmmc
