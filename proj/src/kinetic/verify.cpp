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

#include "kmmc/kinetic/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>

#include "kmmc/ensemble.hpp"
#include "kmmc/error.hpp"
#include "kmmc/histogram.hpp"
#include "kmmc/sampler.hpp"
#include "kmmc/strategies.hpp"

namespace kmmc::kinetic {

double double_well(double x) {
  const double q = x * x - 1.0;
  return std::exp(-q * q / 0.2);
}

namespace {
double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
}  // namespace

double TruncatedGaussian::mass(double y) const { return phi_cdf((hi - y) / sigma) - phi_cdf((lo - y) / sigma); }

double TruncatedGaussian::density(double x, double y) const {
  if (x < lo || x > hi) return 0.0;
  const double u = (x - y) / sigma;
  return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * sigma * mass(y));
}

double TruncatedGaussian::sample(double y, Rng& rng) const {
  for (int attempt = 0; attempt < 100'000; ++attempt) {
    const double x = rng.normal(y, sigma);
    if (x >= lo && x <= hi) return x;
  }
  throw Error("truncated Gaussian sampling failed");
}

double metropolis_rate(const Density1D& target, const TruncatedGaussian& tau, double x, double y) {
  const double num = target(x) * tau.density(y, x);
  const double den = target(y) * tau.density(x, y);
  if (den == 0.0) return 1.0;
  return std::min(1.0, num / den);
}

void mark_monotone(ConvergenceReport& report) {
  bool all = !report.records.empty();
  for (std::size_t k = 0; k < report.records.size(); ++k) {
    auto& r = report.records[k];
    if (k == 0) {
      r.pass = true;
      continue;
    }
    const auto& prev = report.records[k - 1];
    r.pass = r.l1 < prev.l1 || std::max(r.l1, prev.l1) <= r.noise_floor;
    all = all && r.pass;
  }
  report.pass = all && report.entropy_violations == 0;
}

void write_text(std::ostream& os, const ConvergenceReport& report) {
  os << std::setprecision(17);
  os << "regime " << report.regime << '\n';
  for (const auto& r : report.records)
    os << "h=" << r.h << " s=" << r.s << " L1=" << r.l1 << " noise_floor=" << r.noise_floor
       << " pass=" << (r.pass ? "true" : "false") << '\n';
  os << "entropy_violations=" << report.entropy_violations << '\n';
  os << "acceptance_fraction=" << report.acceptance_fraction << '\n';
  os << "result " << (report.pass ? "PASS" : "FAIL") << '\n';
}

void write_csv(std::ostream& os, const ConvergenceReport& report) {
  os << std::setprecision(17);
  os << "h,s,l1,noise_floor,pass\n";
  for (const auto& r : report.records)
    os << r.h << ',' << r.s << ',' << r.l1 << ',' << r.noise_floor << ',' << (r.pass ? 1 : 0) << '\n';
}

namespace {

std::int64_t steps_for(double horizon, double h) {
  const double n = std::round(horizon / h);
  if (!(n >= 1.0)) throw ValidationError("horizon must cover at least one step");
  return static_cast<std::int64_t>(n);
}

void check_h_list(const std::vector<double>& h_list) {
  if (h_list.empty()) throw ValidationError("h list must not be empty");
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    if (!(h_list[k] > 0.0)) throw ValidationError("h must be positive");
    if (k > 0 && !(h_list[k] < h_list[k - 1])) throw ValidationError("h list must be decreasing");
  }
}

std::vector<double> particle_probabilities(const std::vector<ParameterPoint>& snapshot, const Grid& grid,
                                           std::size_t bins) {
  return histogram_1d(first_coordinates(snapshot), uniform_edges(grid.lo, grid.hi, bins)).probabilities();
}

/// Explicit Euler to time s in equal steps no larger than ds_max.
std::size_t substeps(double s, double ds_max) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(s / ds_max - 1e-9)));
}

}  // namespace

void BoltzmannStudy::validate() const {
  check_h_list(h_list);
  if (!(alpha_scale >= 0.0)) throw ValidationError("alpha scale must be nonnegative");
  if (h_list.front() * alpha_scale > 1.0) throw ValidationError("h * alpha_scale must not exceed 1");
  if (!(proposal_sigma > 0.0)) throw ValidationError("proposal sigma must be positive");
  if (!(initial_lo < initial_hi) || initial_lo < grid.lo || initial_hi > grid.hi)
    throw ValidationError("initial interval must lie inside the grid");
  if (ensemble == 0) throw ValidationError("ensemble must be positive");
  if (!(horizon > 0.0) || !(pde_ds > 0.0)) throw ValidationError("times must be positive");
}

double BoltzmannStudy::floor() const {
  return noise_floor > 0.0 ? noise_floor : 3.0 / std::sqrt(static_cast<double>(ensemble));
}

KernelGrid BoltzmannStudy::kernel() const {
  const TruncatedGaussian tau = proposal();
  const Density1D pi = target;
  KernelGrid k = build_kernel([&](double x, double y) { return metropolis_rate(pi, tau, x, y); },
                              [&](double x, double y) { return tau.density(x, y); }, grid);
  return k.scaled(alpha_scale);
}

namespace {

EnsembleResult boltzmann_particles(const BoltzmannStudy& study, double h, std::vector<std::int64_t> steps) {
  const TruncatedGaussian tau = study.proposal();
  const double scale = h * study.alpha_scale;
  const Density1D pi = study.target;
  const ProposalKernel proposal(ProposalKind::custom, [tau](const ProposalContext& ctx, Rng& rng) {
    return ParameterPoint{tau.sample(ctx.current[0], rng)};
  });
  const AcceptanceRule acceptance(AcceptanceKind::custom, [tau, scale, pi](const AcceptanceContext& ctx) {
    return scale == 0.0 ? 0.0 : scale * metropolis_rate(pi, tau, ctx.proposal[0], ctx.current[0]);
  });
  const double lo = study.initial_lo;
  const double hi = study.initial_hi;
  const InitialSampler initial = [lo, hi](Rng& rng) { return ParameterPoint{rng.uniform(lo, hi)}; };
  EnsembleSpec spec{study.ensemble, std::move(steps), study.seed, kDefaultMaxRetries};
  return simulate_ensemble(spec, proposal, acceptance, initial);
}

}  // namespace

ConvergenceReport verify_boltzmann_limit(const BoltzmannStudy& study) {
  study.validate();
  const KernelGrid k = study.kernel();
  const GridDensity f0 = GridDensity::uniform_on(study.grid, study.initial_lo, study.initial_hi);
  const bool frozen = k.max_loss() == 0.0;
  const GridDensity f_inf = frozen ? GridDensity{} : stationary_detail_balance(k);

  ConvergenceReport report;
  report.regime = "boltzmann";
  std::map<double, GridDensity> grid_cache;
  std::int64_t accepted = 0;
  std::int64_t total = 0;

  for (double h : study.h_list) {
    const std::int64_t n = steps_for(study.horizon, h);
    const double s = static_cast<double>(n) * h;

    auto it = grid_cache.find(s);
    if (it == grid_cache.end()) {
      GridDensity f = f0;
      if (!frozen) {
        const std::size_t m = substeps(s, std::min(study.pde_ds, max_boltzmann_step(k)));
        const double ds = s / static_cast<double>(m);
        double h_prev = entropy(f, f_inf);
        for (std::size_t j = 0; j < m; ++j) {
          f = boltzmann_step(f, k, ds);
          const double h_now = entropy(f, f_inf);
          if (h_now > h_prev * (1.0 + 1e-12)) ++report.entropy_violations;
          h_prev = h_now;
        }
      }
      it = grid_cache.emplace(s, std::move(f)).first;
    }

    const EnsembleResult particles = boltzmann_particles(study, h, {n});
    accepted += particles.accepted;
    total += particles.steps;
    const auto p = particle_probabilities(particles.snapshots.front(), study.grid, study.coarse_bins);
    const auto q = coarse_masses(it->second, study.coarse_bins);
    report.records.push_back({h, s, l1_distance(p, q), study.floor(), false});
  }
  report.acceptance_fraction = total > 0 ? static_cast<double>(accepted) / static_cast<double>(total) : 0.0;
  mark_monotone(report);
  return report;
}

double boltzmann_stationary_distance(const BoltzmannStudy& study, double h, double horizon) {
  study.validate();
  const GridDensity f_inf = stationary_detail_balance(study.kernel());
  const EnsembleResult particles = boltzmann_particles(study, h, {steps_for(horizon, h)});
  const auto p = particle_probabilities(particles.snapshots.front(), study.grid, study.coarse_bins);
  return l1_distance(p, coarse_masses(f_inf, study.coarse_bins));
}

void BrownianStudy::validate() const {
  check_h_list(h_list);
  if (!(initial_sd > 0.0)) throw ValidationError("initial sd must be positive");
  if (ensemble == 0) throw ValidationError("ensemble must be positive");
  if (!(horizon > 0.0)) throw ValidationError("horizon must be positive");
}

double BrownianStudy::floor() const {
  return noise_floor > 0.0 ? noise_floor : 3.0 / std::sqrt(static_cast<double>(ensemble));
}

namespace {

EnsembleResult brownian_particles(const BrownianStudy& study, double h, std::vector<std::int64_t> steps,
                                  const InitialSampler& initial) {
  const FPECoefficients c = study.coeff;
  const double root_h = std::sqrt(h);
  const ProposalKernel proposal(ProposalKind::custom, [c, h, root_h](const ProposalContext& ctx, Rng& rng) {
    const double x = ctx.current[0];
    return ParameterPoint{x + h * c.drift(x) + root_h * c.sigma(x) * rng.normal()};
  });
  const AcceptanceRule acceptance(AcceptanceKind::custom, [c](const AcceptanceContext& ctx) {
    const double b = c.beta(ctx.proposal[0]);
    if (!(b >= 0.0 && b <= 1.0)) throw ValidationError("beta must lie in [0, 1]");
    return 1.0 - b;
  });
  EnsembleSpec spec{study.ensemble, std::move(steps), study.seed, kDefaultMaxRetries};
  return simulate_ensemble(spec, proposal, acceptance, initial);
}

}  // namespace

ConvergenceReport verify_brownian_limit(const BrownianStudy& study) {
  study.validate();
  const double m0 = study.initial_mean;
  const double sd0 = study.initial_sd;
  const GridDensity f0 = GridDensity::from_function(study.grid, [m0, sd0](double x) {
    const double u = (x - m0) / sd0;
    return std::exp(-0.5 * u * u);
  });
  const InitialSampler initial = [m0, sd0](Rng& rng) { return ParameterPoint{rng.normal(m0, sd0)}; };
  const double ds_max = 0.95 * max_fokker_planck_step(study.grid, study.coeff);

  ConvergenceReport report;
  report.regime = "brownian";
  std::map<double, GridDensity> grid_cache;
  std::int64_t accepted = 0;
  std::int64_t total = 0;
  for (double h : study.h_list) {
    const std::int64_t n = steps_for(study.horizon, h);
    const double s = static_cast<double>(n) * h;
    auto it = grid_cache.find(s);
    if (it == grid_cache.end()) {
      const std::size_t m = std::isfinite(ds_max) ? substeps(s, ds_max) : 1;
      it = grid_cache.emplace(s, fokker_planck_evolve(f0, study.coeff, s / static_cast<double>(m), m)).first;
    }
    const EnsembleResult particles = brownian_particles(study, h, {n}, initial);
    accepted += particles.accepted;
    total += particles.steps;
    const auto p = particle_probabilities(particles.snapshots.front(), study.grid, study.coarse_bins);
    report.records.push_back({h, s, l1_distance(p, coarse_masses(it->second, study.coarse_bins)), study.floor(), false});
  }
  report.acceptance_fraction = total > 0 ? static_cast<double>(accepted) / static_cast<double>(total) : 0.0;
  mark_monotone(report);
  return report;
}

std::vector<ParticleMoment> brownian_particle_moments(const BrownianStudy& study, double h, double x0,
                                                      const std::vector<std::int64_t>& steps) {
  if (!(h > 0.0)) throw ValidationError("h must be positive");
  const InitialSampler initial = [x0](Rng&) { return ParameterPoint{x0}; };
  const EnsembleResult r = brownian_particles(study, h, steps, initial);
  std::vector<ParticleMoment> out;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto xs = first_coordinates(r.snapshots[k]);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    out.push_back({static_cast<double>(steps[k]) * h, mean, var});
  }
  return out;
}

double fokker_planck_variance_rate(const Grid& grid, const FPECoefficients& coeff, double initial_sd,
                                   std::size_t steps) {
  if (steps == 0) throw ValidationError("steps must be positive");
  const double mid = 0.5 * (grid.lo + grid.hi);
  const GridDensity f0 = GridDensity::from_function(grid, [mid, initial_sd](double x) {
    const double u = (x - mid) / initial_sd;
    return std::exp(-0.5 * u * u);
  });
  const double ds = max_fokker_planck_step(grid, coeff);
  if (!std::isfinite(ds)) return 0.0;
  const GridDensity f1 = fokker_planck_evolve(f0, coeff, ds, steps);
  return (moments(f1).variance - moments(f0).variance) / (ds * static_cast<double>(steps));
}

EntropyResult entropy_study(const EntropyStudy& study) {
  const TruncatedGaussian tau{study.proposal_sigma, study.grid.lo, study.grid.hi};
  const Density1D pi = study.target;
  const KernelGrid k = build_kernel([&](double x, double y) { return metropolis_rate(pi, tau, x, y); },
                                    [&](double x, double y) { return tau.density(x, y); }, study.grid);
  const GridDensity f_inf = stationary_detail_balance(k);
  GridDensity f = GridDensity::uniform_on(study.grid, study.initial_lo, study.initial_hi);

  EntropyResult out;
  out.ds = max_boltzmann_step(k);
  out.entropy.reserve(study.steps + 1);
  out.entropy.push_back(entropy(f, f_inf));
  for (std::size_t j = 0; j < study.steps; ++j) {
    f = boltzmann_step(f, k, out.ds);
    const double h = entropy(f, f_inf);
    const double prev = out.entropy.back();
    const double rel = (h - prev) / prev;
    out.max_relative_increase = std::max(out.max_relative_increase, rel);
    if (rel > 1e-12) ++out.violations;
    out.entropy.push_back(h);
  }
  out.final_l1 = l1_distance(f, f_inf);
  return out;
}

std::vector<double> cell_probabilities(const Density1D& density, const std::vector<double>& edges) {
  if (edges.size() < 2) throw ValidationError("need at least one cell");
  constexpr int kPanels = 64;
  std::vector<double> p(edges.size() - 1);
  double total = 0.0;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const double a = edges[b];
    const double w = (edges[b + 1] - a) / kPanels;
    double s = density(a) + density(edges[b + 1]);
    for (int j = 1; j < kPanels; ++j) s += (j % 2 == 1 ? 4.0 : 2.0) * density(a + j * w);
    p[b] = s * w / 3.0;
    total += p[b];
  }
  for (double& v : p) v /= total;
  return p;
}

double chain_total_variation(const ChainHistogramStudy& study) {
  const double lo = study.lo;
  const double hi = study.hi;
  const Density1D pi = study.target;
  const TargetDensity target = [pi, lo, hi](const ParameterPoint& x) {
    return x[0] < lo || x[0] > hi ? 0.0 : pi(x[0]);
  };
  const ProposalKernel tau = gaussian_kernel(ProjectionBox::unbounded(1), study.proposal_sigma);
  const AcceptanceRule alpha = metropolis_hastings_rule(target, tau);
  ChainConfig config{study.burn_in + study.samples, study.burn_in, study.seed, kDefaultMaxRetries};
  const ChainRecord rec =
      run_chain(config, tau, alpha, [lo, hi](Rng& rng) { return ParameterPoint{rng.uniform(lo, hi)}; });
  const auto edges = uniform_edges(lo, hi, study.bins);
  const auto p = histogram_1d(component(rec.kept(), 0), edges).probabilities();
  const auto q = cell_probabilities(pi, edges);
  return 0.5 * l1_distance(p, q);
}

std::vector<InvariantCheck> detail_balance_suite(std::uint64_t seed) {
  std::vector<InvariantCheck> out;
  const Grid grid(-2.0, 2.0, 100);
  const TruncatedGaussian tau{0.5, grid.lo, grid.hi};
  const Density1D pi = double_well;

  Rng rng(seed, streams::oracle);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(grid.lo, grid.hi);
    const double y = rng.uniform(grid.lo, grid.hi);
    const double a = metropolis_rate(pi, tau, x, y) * tau.density(x, y) * pi(y);
    const double b = metropolis_rate(pi, tau, y, x) * tau.density(y, x) * pi(x);
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
  }
  out.push_back({"metropolis_identity", worst, 1e-12, worst <= 1e-12});

  const KernelGrid k = build_kernel([&](double x, double y) { return metropolis_rate(pi, tau, x, y); },
                                    [&](double x, double y) { return tau.density(x, y); }, grid);
  const GridDensity pi_grid = GridDensity::from_function(grid, pi);
  const double residual = detail_balance_residual(k, pi_grid);
  out.push_back({"kernel_detail_balance", residual, 1e-12, residual <= 1e-12});

  const GridDensity f_inf = stationary_detail_balance(k);
  const double to_target = l1_distance(f_inf, pi_grid);
  out.push_back({"stationary_equals_target", to_target, 1e-10, to_target <= 1e-10});

  const double fixed = l1_distance(boltzmann_step(f_inf, k, max_boltzmann_step(k)), f_inf);
  out.push_back({"stationary_fixed_point", fixed, 1e-10, fixed <= 1e-10});

  const EntropyResult ent = entropy_study({});
  out.push_back({"entropy_violations", static_cast<double>(ent.violations), 0.0, ent.violations == 0});
  out.push_back({"entropy_final_l1", ent.final_l1, 1e-3, ent.final_l1 < 1e-3});

  ChainHistogramStudy chain;
  chain.seed = seed;
  const double tv = chain_total_variation(chain);
  out.push_back({"chain_total_variation", tv, 0.05, tv < 0.05});
  return out;
}

}  // namespace kmmc::kinetic
