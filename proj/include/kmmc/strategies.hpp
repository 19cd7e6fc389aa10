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

// Proposal kernels and acceptance rules for the MMC chain.
//
// The acceptance rules shipped here ignore the moment arguments of
// AcceptanceContext: they depend on (x_p, x_n) and the step index only.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>

#include "kmmc/observations.hpp"
#include "kmmc/point.hpp"
#include "kmmc/rng.hpp"
#include "kmmc/sampler.hpp"

namespace kmmc {

inline constexpr double kLikelihoodFloor = 1e-12;

/// alpha = L_p / (L_p + L_n). Throws Error("degenerate likelihood") unless both are positive.
[[nodiscard]] double acceptance_ratio(double likelihood_proposal, double likelihood_current);

/// Componentwise interval [lo, hi]; lo == hi pins a coordinate.
struct ProjectionBox {
  ParameterPoint lo;
  ParameterPoint hi;

  /// [min, max] of (f_lo * ref_i, f_hi * ref_i) per component.
  static ProjectionBox around(const ParameterPoint& ref, double f_lo = 0.75, double f_hi = 1.25);
  static ProjectionBox unbounded(std::size_t dim);

  [[nodiscard]] std::size_t size() const noexcept { return lo.size(); }
  void validate() const;
};

[[nodiscard]] ParameterPoint project_box(const ParameterPoint& x, const ProjectionBox& box);

/// project_box(Z) with Z ~ N(x_n, scale^2 * Id).
[[nodiscard]] ParameterPoint gaussian_proposal(const ParameterPoint& xn, const ProjectionBox& box, Rng& rng,
                                               double scale = 1.0);

/// project_box(x_n + grad) or project_box(x_n - grad), each with probability 1/2.
[[nodiscard]] ParameterPoint gradient_proposal(const ParameterPoint& xn, const ParameterPoint& grad,
                                               const ProjectionBox& box, Rng& rng);

using TargetDensity = std::function<double(const ParameterPoint&)>;

/// min(1, pi(x_p) tau(x_n|x_p) / (pi(x_n) tau(x_p|x_n))); 1 when the denominator vanishes.
[[nodiscard]] double metropolis_hastings_acceptance(const TargetDensity& target, const ProposalKernel& tau,
                                                    const ParameterPoint& xp, const ParameterPoint& xn);

/// Gaussian random-walk kernel. The reported density is that of the
/// unprojected normal, which is exact only for an unbounded box.
[[nodiscard]] ProposalKernel gaussian_kernel(ProjectionBox box, double scale = 1.0);

/// Gradient direction at x for the given 1-based step.
using GradientFn = std::function<ParameterPoint(const ParameterPoint& x, std::int64_t step)>;
[[nodiscard]] ProposalKernel gradient_kernel(GradientFn gradient, ProjectionBox box);

[[nodiscard]] AcceptanceRule metropolis_hastings_rule(TargetDensity target, ProposalKernel tau);

/// 1 / max(mean_square_misfit, floor).
[[nodiscard]] double likelihood_from_misfit(double mean_square_misfit, double floor = kLikelihoodFloor);

/// 1 / max(||v(T,x) - z||^2, floor) with T = z.t.
[[nodiscard]] double likelihood_fixed_time(const ParameterPoint& x, const Observation& z, const ForwardModel& model,
                                           double floor = kLikelihoodFloor);

/// Reciprocal of the mean squared misfit over the first n data, floored.
[[nodiscard]] double likelihood_running(const ParameterPoint& x, const ObservationSet& nu, const ForwardModel& model,
                                        std::size_t n, double floor = kLikelihoodFloor);

/// Likelihood bound to a model and data set, evaluated at a given step.
///
/// Fixed-time: step k compares against datum ((k-1) mod K) + 1, so runs longer
/// than the data set cycle through it. Running-time: step k uses the first
/// min(k, K) data.
class Likelihood {
 public:
  Likelihood(ObservationMode kind, ForwardModel model, std::shared_ptr<const ObservationSet> data,
             double floor = kLikelihoodFloor);

  [[nodiscard]] double operator()(const ParameterPoint& x, std::int64_t step) const;
  [[nodiscard]] ObservationMode kind() const noexcept { return kind_; }
  [[nodiscard]] const ObservationSet& data() const noexcept { return *data_; }
  /// 0-based datum used by a fixed-time evaluation at `step`.
  [[nodiscard]] std::size_t fixed_time_index(std::int64_t step) const;

 private:
  ObservationMode kind_;
  ForwardModel model_;
  std::shared_ptr<const ObservationSet> data_;
  double floor_;
};

[[nodiscard]] AcceptanceRule likelihood_ratio_acceptance(Likelihood likelihood);

}  // namespace kmmc
