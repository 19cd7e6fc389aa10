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

#include "kmmc/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kmmc/error.hpp"

namespace kmmc {

double acceptance_ratio(double likelihood_proposal, double likelihood_current) {
  if (!(likelihood_proposal > 0.0) || !(likelihood_current > 0.0)) throw Error("degenerate likelihood");
  // The larger share is divided out and the smaller one taken as its
  // complement, so swapping the arguments sums to one exactly.
  const double sum = likelihood_proposal + likelihood_current;
  if (likelihood_proposal >= likelihood_current) return likelihood_proposal / sum;
  return 1.0 - likelihood_current / sum;
}

ProjectionBox ProjectionBox::around(const ParameterPoint& ref, double f_lo, double f_hi) {
  ProjectionBox box{ParameterPoint(ref.size()), ParameterPoint(ref.size())};
  for (std::size_t i = 0; i < ref.size(); ++i) {
    box.lo[i] = std::min(f_lo * ref[i], f_hi * ref[i]);
    box.hi[i] = std::max(f_lo * ref[i], f_hi * ref[i]);
  }
  return box;
}

ProjectionBox ProjectionBox::unbounded(std::size_t dim) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {ParameterPoint(dim, -inf), ParameterPoint(dim, inf)};
}

void ProjectionBox::validate() const {
  if (lo.size() != hi.size()) throw ValidationError("projection box bounds differ in dimension");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw ValidationError("projection box requires lo <= hi");
}

ParameterPoint project_box(const ParameterPoint& x, const ProjectionBox& box) {
  if (x.size() != box.size()) throw ValidationError("projection box dimension mismatch");
  ParameterPoint out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], box.lo[i], box.hi[i]);
  return out;
}

ParameterPoint gaussian_proposal(const ParameterPoint& xn, const ProjectionBox& box, Rng& rng, double scale) {
  ParameterPoint z(xn.size());
  for (std::size_t i = 0; i < xn.size(); ++i) z[i] = rng.normal(xn[i], scale);
  return project_box(z, box);
}

ParameterPoint gradient_proposal(const ParameterPoint& xn, const ParameterPoint& grad, const ProjectionBox& box,
                                 Rng& rng) {
  if (grad.size() != xn.size()) throw ValidationError("gradient dimension mismatch");
  const double sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
  ParameterPoint z(xn.size());
  for (std::size_t i = 0; i < xn.size(); ++i) z[i] = xn[i] + sign * grad[i];
  return project_box(z, box);
}

double metropolis_hastings_acceptance(const TargetDensity& target, const ProposalKernel& tau,
                                      const ParameterPoint& xp, const ParameterPoint& xn) {
  const double num = target(xp) * tau.density(xn, xp);
  const double den = target(xn) * tau.density(xp, xn);
  if (den == 0.0) return 1.0;
  return std::min(1.0, num / den);
}

ProposalKernel gaussian_kernel(ProjectionBox box, double scale) {
  box.validate();
  if (!(scale > 0.0)) throw ValidationError("proposal scale must be positive");
  return ProposalKernel(
      ProposalKind::gaussian,
      [box, scale](const ProposalContext& ctx, Rng& rng) { return gaussian_proposal(ctx.current, box, rng, scale); },
      [scale](const ParameterPoint& to, const ParameterPoint& from) {
        double q = 0.0;
        for (std::size_t i = 0; i < to.size(); ++i) {
          const double u = (to[i] - from[i]) / scale;
          q += u * u;
        }
        const double norm = std::pow(std::sqrt(2.0 * std::numbers::pi) * scale, static_cast<double>(to.size()));
        return std::exp(-0.5 * q) / norm;
      });
}

ProposalKernel gradient_kernel(GradientFn gradient, ProjectionBox box) {
  box.validate();
  return ProposalKernel(ProposalKind::gradient,
                        [gradient = std::move(gradient), box](const ProposalContext& ctx, Rng& rng) {
                          return gradient_proposal(ctx.current, gradient(ctx.current, ctx.step), box, rng);
                        });
}

AcceptanceRule metropolis_hastings_rule(TargetDensity target, ProposalKernel tau) {
  if (!tau.has_density()) throw ValidationError("Metropolis-Hastings acceptance needs a proposal density");
  return {AcceptanceKind::metropolis_hastings,
          [target = std::move(target), tau = std::move(tau)](const AcceptanceContext& ctx) {
            return metropolis_hastings_acceptance(target, tau, ctx.proposal, ctx.current);
          }};
}

double likelihood_from_misfit(double mean_square_misfit, double floor) {
  return 1.0 / std::max(mean_square_misfit, floor);
}

namespace {

std::vector<std::vector<double>> evaluate(const ForwardModel& model, const ParameterPoint& x,
                                          std::span<const double> times) {
  std::vector<std::vector<double>> out;
  try {
    out = model(x, times);
  } catch (const ModelEvaluationError& e) {
    throw ModelEvaluationError(std::string("model evaluation failed: ") + e.what());
  }
  if (out.size() != times.size()) throw ModelEvaluationError("model evaluation failed: wrong output count");
  for (const auto& v : out)
    for (double c : v)
      if (!std::isfinite(c)) throw ModelEvaluationError("model evaluation failed: non-finite output");
  return out;
}

double squared_misfit(const std::vector<double>& v, const std::vector<double>& z) {
  if (v.size() != z.size()) throw ValidationError("model output and observation differ in dimension");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += (v[i] - z[i]) * (v[i] - z[i]);
  return s;
}

}  // namespace

double likelihood_fixed_time(const ParameterPoint& x, const Observation& z, const ForwardModel& model, double floor) {
  const double t = z.t;
  const auto v = evaluate(model, x, std::span<const double>(&t, 1));
  return likelihood_from_misfit(squared_misfit(v.front(), z.z), floor);
}

double likelihood_running(const ParameterPoint& x, const ObservationSet& nu, const ForwardModel& model, std::size_t n,
                          double floor) {
  if (n == 0 || n > nu.size()) throw ValidationError("running likelihood needs 1 <= n <= number of data");
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) times[i] = nu.data[i].t;
  const auto v = evaluate(model, x, times);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += squared_misfit(v[i], nu.data[i].z);
  return likelihood_from_misfit(sum / static_cast<double>(n), floor);
}

Likelihood::Likelihood(ObservationMode kind, ForwardModel model, std::shared_ptr<const ObservationSet> data,
                       double floor)
    : kind_(kind), model_(std::move(model)), data_(std::move(data)), floor_(floor) {
  if (!data_ || data_->size() == 0) throw ValidationError("likelihood needs at least one observation");
  if (!(floor_ > 0.0)) throw ValidationError("likelihood floor must be positive");
}

std::size_t Likelihood::fixed_time_index(std::int64_t step) const {
  const auto k = static_cast<std::int64_t>(data_->size());
  return static_cast<std::size_t>((std::max<std::int64_t>(step, 1) - 1) % k);
}

double Likelihood::operator()(const ParameterPoint& x, std::int64_t step) const {
  if (kind_ == ObservationMode::fixed_time) return likelihood_fixed_time(x, data_->data[fixed_time_index(step)], model_, floor_);
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max<std::int64_t>(step, 1)), data_->size());
  return likelihood_running(x, *data_, model_, n, floor_);
}

AcceptanceRule likelihood_ratio_acceptance(Likelihood likelihood) {
  return {AcceptanceKind::likelihood_ratio, [likelihood = std::move(likelihood)](const AcceptanceContext& ctx) {
            return acceptance_ratio(likelihood(ctx.proposal, ctx.step), likelihood(ctx.current, ctx.step));
          }};
}

}  // namespace kmmc
