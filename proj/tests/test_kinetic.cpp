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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <numeric>
#include <vector>

#include "kmmc/error.hpp"
#include "kmmc/kinetic/boltzmann.hpp"
#include "kmmc/kinetic/fokker_planck.hpp"
#include "kmmc/kinetic/grid.hpp"
#include "kmmc/kinetic/micromacro_grid.hpp"
#include "kmmc/kinetic/verify.hpp"
#include "oracles.hpp"

using namespace kmmc;
using namespace kmmc::kinetic;

namespace {

KernelGrid metropolis_kernel(const Grid& g, double sigma = 0.5) {
  const TruncatedGaussian tau{sigma, g.lo, g.hi};
  return build_kernel([&](double x, double y) { return metropolis_rate(double_well, tau, x, y); },
                      [&](double x, double y) { return tau.density(x, y); }, g);
}

KernelGrid random_kernel(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(m * m);
  for (double& x : v) x = 0.1 + rng.uniform();
  return KernelGrid(Grid(0.0, static_cast<double>(m), m), v);
}

/// Dense generator matrix G with d/ds f = G f.
Eigen::MatrixXd generator_matrix(const KernelGrid& k) {
  const std::size_t m = k.size();
  const double dx = k.grid().dx();
  Eigen::MatrixXd g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(i, j) = k(i, j) * dx;
  for (std::size_t j = 0; j < m; ++j) g(j, j) -= k.loss(j);
  return g;
}

}  // namespace

TEST(Grid, Geometry) {
  const Grid g(-1.0, 1.0, 4);
  EXPECT_DOUBLE_EQ(g.dx(), 0.5);
  EXPECT_DOUBLE_EQ(g.center(0), -0.75);
  EXPECT_EQ(g.edges().size(), 5u);
  EXPECT_THROW(Grid(1.0, 1.0, 3), ValidationError);
  EXPECT_THROW(Grid(0.0, 1.0, 0), ValidationError);
}

TEST(GridDensity, UniformOnAndCoarseMasses) {
  const Grid g(-2.0, 2.0, 100);
  const auto f = GridDensity::uniform_on(g, -2.0, -1.0);
  EXPECT_NEAR(f.mass(), 1.0, 1e-14);
  const auto c = coarse_masses(f, 4);
  EXPECT_NEAR(c[0], 1.0, 1e-14);
  EXPECT_EQ(c[3], 0.0);
  EXPECT_THROW((void)coarse_masses(f, 7), ValidationError);
}

TEST(BuildKernel, ZeroAcceptance) {
  const Grid g(0.0, 1.0, 10);
  const auto k = build_kernel([](double, double) { return 0.0; }, [](double, double) { return 1.0; }, g);
  for (double v : k.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(k.max_loss(), 0.0);
  EXPECT_TRUE(std::isinf(max_boltzmann_step(k)));
}

TEST(BuildKernel, UniformProposal) {
  const Grid g(0.0, 1.0, 10);
  const auto k = build_kernel([](double, double) { return 1.0; }, [](double, double) { return 1.0; }, g);
  for (double v : k.values()) EXPECT_DOUBLE_EQ(v, 1.0);
  EXPECT_DOUBLE_EQ(k.loss(3), 1.0);
}

TEST(BuildKernel, NormalizationChecked) {
  const Grid g(0.0, 1.0, 10);
  try {
    (void)build_kernel([](double, double) { return 1.0; }, [](double, double) { return 2.0; }, g);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "proposal density not normalized on grid");
  }
}

TEST(BuildKernel, MetropolisDetailBalance) {
  const Grid g(-2.0, 2.0, 100);
  const auto k = metropolis_kernel(g);
  for (std::size_t i = 0; i < g.cells; ++i)
    for (std::size_t j = 0; j < g.cells; ++j) {
      const double a = k(i, j) * double_well(g.center(j));
      const double b = k(j, i) * double_well(g.center(i));
      ASSERT_NEAR(a, b, 1e-12 * std::max(1.0, std::max(a, b)));
    }
}

TEST(BoltzmannStep, StationaryIsFixedPoint) {
  const auto k = metropolis_kernel(Grid(-2.0, 2.0, 100));
  const auto f_inf = stationary_detail_balance(k);
  const auto f1 = boltzmann_step(f_inf, k, max_boltzmann_step(k));
  for (std::size_t i = 0; i < f1.values.size(); ++i) EXPECT_NEAR(f1.values[i], f_inf.values[i], 1e-12);
}

TEST(BoltzmannStep, ZeroKernelLeavesDensity) {
  const Grid g(0.0, 1.0, 5);
  const KernelGrid k(g, std::vector<double>(25, 0.0));
  const GridDensity f(g, {1.0, 2.0, 0.5, 0.5, 1.0});
  EXPECT_EQ(boltzmann_step(f, k, 10.0).values, f.values);
}

TEST(BoltzmannStep, MatchesMatrixExponential) {
  const auto k = random_kernel(3, 1);
  const double ds = 1e-4;
  const GridDensity f(k.grid(), {0.5, 0.3, 0.2});
  const auto g = generator_matrix(k);
  const Eigen::Vector3d exact = (g * ds).exp() * Eigen::Vector3d(0.5, 0.3, 0.2);
  const auto euler = boltzmann_step(f, k, ds);
  const double bound = g.squaredNorm() * ds * ds;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(euler.values[i], exact(i), bound);
  // And the error is genuinely second order: not within ds^2 / 100.
  double err = 0.0;
  for (int i = 0; i < 3; ++i) err += std::abs(euler.values[i] - exact(i));
  EXPECT_GT(err, 1e-3 * bound);
}

TEST(BoltzmannStep, ConservesMassAndPositivity) {
  const auto k = metropolis_kernel(Grid(-2.0, 2.0, 100)).scaled(3.0);
  auto f = GridDensity::uniform_on(k.grid(), -2.0, -1.0);
  const double ds = max_boltzmann_step(k);
  for (int s = 0; s < 200; ++s) {
    f = boltzmann_step(f, k, ds);
    ASSERT_NEAR(f.mass(), 1.0, 1e-12);
    for (double v : f.values) ASSERT_GE(v, 0.0);
  }
}

TEST(BoltzmannStep, RejectsLargeStep) {
  const auto k = random_kernel(4, 2);
  const GridDensity f(k.grid(), {0.25, 0.25, 0.25, 0.25});
  try {
    (void)boltzmann_step(f, k, 1.01 * max_boltzmann_step(k));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "step too large");
  }
}

TEST(Generator, ParallelMatchesSerial) {
  const auto k = random_kernel(300, 3);
  std::vector<double> f(300);
  Rng rng(4);
  for (double& v : f) v = rng.uniform();
  EXPECT_EQ(apply_generator(k, f), apply_generator_serial(k, f));
}

TEST(Stationary, SymmetricKernelGivesUniform) {
  const Grid g(0.0, 2.0, 8);
  std::vector<double> v(64);
  Rng rng(5);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j <= i; ++j) v[i * 8 + j] = v[j * 8 + i] = 0.2 + rng.uniform();
  const auto f = stationary_detail_balance(KernelGrid(g, v));
  for (double x : f.values) EXPECT_NEAR(x, 0.5, 1e-12);
}

TEST(Stationary, MetropolisKernelRecoversTarget) {
  const Grid g(-2.0, 2.0, 100);
  const auto f = stationary_detail_balance(metropolis_kernel(g));
  const auto pi = GridDensity::from_function(g, double_well);
  EXPECT_LT(l1_distance(f, pi), 1e-10);
  EXPECT_LT(detail_balance_residual(metropolis_kernel(g), f), 1e-10);
}

TEST(Stationary, RandomKernelHasZeroNetFlux) {
  const auto k = random_kernel(4, 6);
  const auto f = stationary_detail_balance(k);
  EXPECT_NEAR(f.mass(), 1.0, 1e-12);
  for (double v : f.values) EXPECT_GT(v, 0.0);
  for (double r : apply_generator(k, f.values)) EXPECT_NEAR(r, 0.0, 1e-10);
  // Cross-check against the dense null vector.
  Eigen::FullPivLU<Eigen::MatrixXd> lu(generator_matrix(k));
  Eigen::VectorXd n = lu.kernel().col(0);
  n /= n.sum();
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(f.values[i], n(i), 1e-10);
}

TEST(Stationary, ReducibleKernelRejected) {
  const Grid g(0.0, 4.0, 4);
  std::vector<double> v(16, 0.0);
  v[0 * 4 + 1] = v[1 * 4 + 0] = 1.0;
  v[2 * 4 + 3] = v[3 * 4 + 2] = 1.0;
  try {
    (void)stationary_detail_balance(KernelGrid(g, v));
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "no unique stationary density");
  }
}

TEST(Entropy, Examples) {
  const Grid g(0.0, 1.0, 20);
  const GridDensity uniform(g, std::vector<double>(20, 1.0));
  EXPECT_NEAR(entropy(uniform, uniform), 1.0, 1e-14);
  std::vector<double> spike(20, 0.0);
  spike[7] = 20.0;
  EXPECT_NEAR(entropy(GridDensity(g, spike), uniform), 20.0, 1e-12);
  Rng rng(7);
  for (int r = 0; r < 50; ++r) {
    std::vector<double> v(20);
    for (double& x : v) x = rng.uniform();
    GridDensity f(g, v);
    f.normalize();
    EXPECT_GE(entropy(f, uniform), 1.0 - 1e-14);
  }
  std::vector<double> hole(20, 1.0);
  hole[3] = 0.0;
  EXPECT_THROW((void)entropy(uniform, GridDensity(g, hole)), ValidationError);
}

TEST(Entropy, DecaysAlongEvolution) {
  const auto r = entropy_study({});
  EXPECT_EQ(r.violations, 0u);
  EXPECT_LT(r.final_l1, 1e-3);
  EXPECT_GE(r.entropy.front(), r.entropy.back());
}

TEST(FokkerPlanck, HeatEquationVarianceRate) {
  EXPECT_NEAR(fokker_planck_variance_rate(Grid(-5, 5, 200), FPECoefficients{}, 0.5, 100), 1.0, 0.02);
}

TEST(FokkerPlanck, FullRejectionDoublesDiffusion) {
  FPECoefficients c;
  c.beta = [](double) { return 1.0; };
  EXPECT_NEAR(fokker_planck_variance_rate(Grid(-5, 5, 200), c, 0.5, 100), 2.0, 0.04);
  c.diffusion = RejectionDiffusion::particle_consistent;
  c.beta = [](double) { return 0.5; };
  EXPECT_NEAR(fokker_planck_variance_rate(Grid(-5, 5, 200), c, 0.5, 100), 0.5, 0.01);
}

TEST(FokkerPlanck, UniformIsStationary) {
  const Grid g(0.0, 1.0, 50);
  FPECoefficients c;
  c.sigma = [](double) { return 0.7; };
  c.beta = [](double) { return 0.3; };
  GridDensity f(g, std::vector<double>(50, 1.0));
  const auto f1 = fokker_planck_evolve(f, c, max_fokker_planck_step(g, c), 100);
  for (double v : f1.values) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(FokkerPlanck, DriftMovesMeanAndConservesMass) {
  const Grid g(-5.0, 5.0, 400);
  FPECoefficients c;
  c.drift = [](double) { return 1.0; };
  c.sigma = [](double) { return 0.2; };
  auto f = GridDensity::from_function(g, [](double x) { return std::exp(-0.5 * (x + 2) * (x + 2) / 0.04); });
  const double ds = max_fokker_planck_step(g, c);
  const std::size_t n = static_cast<std::size_t>(std::ceil(1.0 / ds));
  const double m0 = moments(f).mean;
  f = fokker_planck_evolve(f, c, 1.0 / static_cast<double>(n), n);
  EXPECT_NEAR(f.mass(), 1.0, 1e-12);
  EXPECT_NEAR(moments(f).mean - m0, 1.0, 0.02);
  for (double v : f.values) EXPECT_GE(v, 0.0);
}

TEST(FokkerPlanck, Errors) {
  const Grid g(-1.0, 1.0, 20);
  const GridDensity f(g, std::vector<double>(20, 0.5));
  const FPECoefficients c;
  EXPECT_THROW((void)fokker_planck_step(f, c, 2.0 * max_fokker_planck_step(g, c)), ValidationError);
  FPECoefficients bad_beta;
  bad_beta.beta = [](double) { return 1.5; };
  EXPECT_THROW((void)fokker_planck_step(f, bad_beta, 1e-6), ValidationError);
  FPECoefficients bad_sigma;
  bad_sigma.sigma = [](double) { return 0.0; };
  EXPECT_THROW((void)fokker_planck_step(f, bad_sigma, 1e-6), ValidationError);
}

TEST(BrownianParticles, RandomWalkVariance) {
  BrownianStudy s;
  s.coeff = FPECoefficients{};
  s.ensemble = 20'000;
  const auto m = brownian_particle_moments(s, 0.01, 0.0, {50, 100});
  EXPECT_NEAR(m[0].variance, 0.5, 0.03 * 0.5 * 1.5);
  EXPECT_NEAR(m[1].variance, 1.0, 0.03 * 1.5);
}

TEST(TruncatedGaussianProposal, DensityIntegratesToOne) {
  const TruncatedGaussian t{0.5, -2.0, 2.0};
  for (double y : {-2.0, -0.3, 1.9}) {
    double s = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) s += t.density(-2.0 + (i + 0.5) * 4.0 / n, y) * 4.0 / n;
    EXPECT_NEAR(s, 1.0, 1e-6);
    EXPECT_NEAR(t.mass(y), oracle::normal_cdf((2.0 - y) / 0.5) - oracle::normal_cdf((-2.0 - y) / 0.5), 1e-14);
  }
  EXPECT_EQ(t.density(2.5, 0.0), 0.0);
}

TEST(BoltzmannLimit, ConvergesWithDecreasingH) {
  const auto r = verify_boltzmann_limit({});
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.entropy_violations, 0u);
}

TEST(BoltzmannLimit, FrozenWithoutAcceptance) {
  BoltzmannStudy s;
  s.alpha_scale = 0.0;
  const auto r = verify_boltzmann_limit(s);
  EXPECT_NEAR(r.acceptance_fraction, 0.0, 0.0);
  // Only the sampling error of the frozen uniform initial data remains.
  for (const auto& rec : r.records) EXPECT_LT(rec.l1, s.floor());
}

TEST(BoltzmannLimit, ReachesStationaryDensity) {
  BoltzmannStudy s;
  EXPECT_LT(boltzmann_stationary_distance(s, 0.1, 150.0), 0.05);
}

TEST(MonotoneRule, NoiseFloorHandling) {
  ConvergenceReport r;
  r.records = {{0.2, 1, 0.10, 0.03, false}, {0.1, 1, 0.05, 0.03, false}, {0.05, 1, 0.02, 0.03, false}};
  mark_monotone(r);
  EXPECT_TRUE(r.pass);
  r.records[2].l1 = 0.06;
  mark_monotone(r);
  EXPECT_FALSE(r.pass);
  r.records = {{0.2, 1, 0.02, 0.03, false}, {0.1, 1, 0.025, 0.03, false}};
  mark_monotone(r);
  EXPECT_TRUE(r.pass);
}

TEST(DetailBalanceSuite, AllChecksPass) {
  for (const auto& c : detail_balance_suite(0)) EXPECT_TRUE(c.pass) << c.name << " = " << c.value;
}

TEST(MicroMacroGrid, EqualInitialDataCollapse) {
  const auto q = metropolis_kernel(Grid(-2.0, 2.0, 60));
  const auto f0 = GridDensity::uniform_on(q.grid(), -2.0, -1.0);
  const double ds = 0.01;
  const auto r = solve_micromacro_grid(q, GammaChoice::constant(1.0), ZetaPath::constant(0.4), f0, f0, ds, 100);
  const auto direct = boltzmann_evolve(f0, q, ds, 100);
  EXPECT_LT(l1_distance(r.micro.back(), r.macro.back()), 1e-10);
  EXPECT_LT(l1_distance(r.combined.back(), direct.back()), 1e-10);
}

TEST(MicroMacroGrid, ReconstructionTracksUnsplitSolution) {
  const auto q = metropolis_kernel(Grid(-2.0, 2.0, 60));
  const auto micro = GridDensity::uniform_on(q.grid(), -2.0, -1.0);
  const auto macro = GridDensity::from_function(q.grid(), [](double x) { return std::exp(-2.0 * (x - 0.5) * (x - 0.5)); });
  const double ds = 0.01;
  for (auto gamma : {GammaChoice::constant(1.0), GammaChoice::zeta()}) {
    for (const auto& path : {ZetaPath::constant(0.3), ZetaPath::linear(0.3, 0.2)}) {
      const auto r = solve_micromacro_grid(q, gamma, path, micro, macro, ds, 100);
      const auto direct = boltzmann_evolve(r.combined.front(), q, ds, 100);
      EXPECT_LT(l1_distance(r.combined.back(), direct.back()), 5 * ds);
      EXPECT_NEAR(r.times.back(), 1.0, 1e-12);
    }
  }
}

TEST(MicroMacroGrid, DegenerateSplitting) {
  const auto q = metropolis_kernel(Grid(-2.0, 2.0, 60));
  const auto f0 = GridDensity::uniform_on(q.grid(), -2.0, -1.0);
  try {
    (void)solve_micromacro_grid(q, GammaChoice::zeta(), ZetaPath::linear(0.5, 1.0), f0, f0, 0.1, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "splitting degenerate");
  }
}
