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

#include <cmath>
#include <numeric>
#include <vector>

#include "kmmc/ensemble.hpp"
#include "kmmc/error.hpp"
#include "kmmc/histogram.hpp"
#include "kmmc/sampler.hpp"
#include "kmmc/strategies.hpp"
#include "oracles.hpp"

using namespace kmmc;

namespace {

ProposalKernel normal_walk(double sd = 1.0) {
  return ProposalKernel(ProposalKind::custom, [sd](const ProposalContext& ctx, Rng& rng) {
    ParameterPoint p = ctx.current;
    for (double& v : p) v = rng.normal(v, sd);
    return p;
  });
}

InitialSampler at(ParameterPoint x) {
  return [x](Rng&) { return x; };
}

}  // namespace

TEST(MmcStep, CertainAcceptanceTakesEveryProposal) {
  ParameterPoint last_proposal;
  const ProposalKernel tau(ProposalKind::custom, [&last_proposal](const ProposalContext& ctx, Rng& rng) {
    last_proposal = ParameterPoint{ctx.current[0] + rng.normal()};
    return last_proposal;
  });
  auto state = ChainState::start(ParameterPoint{0.0}, Rng(1));
  for (int i = 0; i < 1000; ++i) {
    const auto r = mmc_step(state, tau, constant_acceptance(1.0));
    ASSERT_TRUE(r.accepted);
    ASSERT_EQ(state.current, last_proposal);
  }
  EXPECT_EQ(state.accept_count, 1000);
  EXPECT_EQ(state.iteration, 1000);
  EXPECT_EQ(state.moments.count, state.iteration);
}

TEST(MmcStep, CertainRejectionNeverMoves) {
  auto state = ChainState::start(ParameterPoint{3.0, -1.0}, Rng(2));
  for (int i = 0; i < 500; ++i) {
    EXPECT_FALSE(mmc_step(state, normal_walk(), constant_acceptance(0.0)).accepted);
    ASSERT_EQ(state.current, (ParameterPoint{3.0, -1.0}));
  }
  EXPECT_EQ(state.accept_count, 0);
  EXPECT_DOUBLE_EQ(state.moments.first[0], 3.0);
  EXPECT_DOUBLE_EQ(state.moments.second[1], 1.0);
  EXPECT_EQ(state.moments.max_variance(), 0.0);
}

TEST(MmcStep, HalfAcceptanceFraction) {
  auto state = ChainState::start(ParameterPoint{0.0}, Rng(3));
  const int n = 100'000;
  for (int i = 0; i < n; ++i) (void)mmc_step(state, normal_walk(), constant_acceptance(0.5));
  EXPECT_NEAR(static_cast<double>(state.accept_count) / n, 0.5, 0.01);
}

TEST(MmcStep, AcceptanceSeesCandidateMoments) {
  // omega_n(x_p) and omega_n(x_n) are the moment updates for each outcome.
  auto state = ChainState::start(ParameterPoint{1.0}, Rng(4));
  state.moments = update_moments(ParameterPoint{1.0}, MomentVector::zero(1));
  state.iteration = 1;
  const ProposalKernel tau(ProposalKind::custom, [](const ProposalContext&, Rng&) { return ParameterPoint{3.0}; });
  const AcceptanceRule check(AcceptanceKind::custom, [](const AcceptanceContext& c) {
    EXPECT_DOUBLE_EQ(c.proposal_moments.first[0], 2.0);
    EXPECT_DOUBLE_EQ(c.proposal_moments.second[0], 5.0);
    EXPECT_DOUBLE_EQ(c.current_moments.first[0], 1.0);
    EXPECT_EQ(c.step, 2);
    return 1.0;
  });
  (void)mmc_step(state, tau, check);
  EXPECT_DOUBLE_EQ(state.moments.first[0], 2.0);
}

TEST(MmcStep, RejectsInvalidAcceptance) {
  auto state = ChainState::start(ParameterPoint{0.0}, Rng(5));
  for (double bad : {-0.1, 1.5, std::nan("")}) {
    try {
      (void)mmc_step(state, normal_walk(), AcceptanceRule(AcceptanceKind::custom, [bad](const AcceptanceContext&) {
                       return bad;
                     }));
      FAIL() << "expected an error for alpha = " << bad;
    } catch (const Error& e) {
      EXPECT_STREQ(e.what(), "invalid acceptance value");
    }
  }
}

TEST(MmcStep, RetriesModelFailures) {
  int calls = 0;
  const AcceptanceRule flaky(AcceptanceKind::custom, [&calls](const AcceptanceContext&) -> double {
    if (++calls <= 3) throw ModelEvaluationError("model evaluation failed");
    return 1.0;
  });
  auto state = ChainState::start(ParameterPoint{0.0}, Rng(6));
  const auto r = mmc_step(state, normal_walk(), flaky);
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.retries, 3);
  EXPECT_EQ(state.iteration, 1);
}

TEST(MmcStep, ExhaustedProposalRegion) {
  const AcceptanceRule broken(AcceptanceKind::custom, [](const AcceptanceContext&) -> double {
    throw ModelEvaluationError("model evaluation failed");
  });
  auto state = ChainState::start(ParameterPoint{0.0}, Rng(7));
  try {
    (void)mmc_step(state, normal_walk(), broken);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "proposal region exhausted");
  }
}

TEST(RunChain, BurnInLeavesRemainder) {
  const auto rec = run_chain({10'000, 1000, 1, kDefaultMaxRetries}, normal_walk(), constant_acceptance(0.3),
                             at(ParameterPoint{0.0}));
  EXPECT_EQ(rec.samples.size(), 10'000u);
  EXPECT_EQ(rec.accepted.size(), 10'000u);
  EXPECT_EQ(rec.kept().size(), 9000u);
}

TEST(RunChain, DefaultBurnInIs1000) { EXPECT_EQ(ChainConfig{}.burn_in, 1000); }

TEST(RunChain, DeterministicInSeed) {
  const ChainConfig cfg{2000, 100, 42, kDefaultMaxRetries};
  const auto a = run_chain(cfg, normal_walk(), constant_acceptance(0.5), at(ParameterPoint{0.0, 1.0}));
  const auto b = run_chain(cfg, normal_walk(), constant_acceptance(0.5), at(ParameterPoint{0.0, 1.0}));
  EXPECT_EQ(a, b);
  const auto c =
      run_chain({2000, 100, 43, kDefaultMaxRetries}, normal_walk(), constant_acceptance(0.5), at(ParameterPoint{0.0, 1.0}));
  EXPECT_NE(a.samples, c.samples);
}

TEST(RunChain, RandomWalkStepVariance) {
  const auto rec = run_chain({10'000, 0, 8, kDefaultMaxRetries}, gaussian_kernel(ProjectionBox::unbounded(1), 1.5),
                             constant_acceptance(1.0), at(ParameterPoint{0.0}));
  double s2 = 0.0;
  double prev = 0.0;
  for (const auto& x : rec.samples) {
    s2 += (x[0] - prev) * (x[0] - prev);
    prev = x[0];
  }
  EXPECT_NEAR(s2 / 10'000.0, 1.5 * 1.5, 0.05 * 2.25);
}

TEST(RunChain, FinalMomentsMatchHistory) {
  const auto rec = run_chain({5000, 500, 9, kDefaultMaxRetries}, normal_walk(0.3), constant_acceptance(0.7),
                             at(ParameterPoint{1.0, -2.0, 30.0}));
  const auto b = oracle::batch_moments(rec.samples);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(rec.final_moments.first[i], b.mean[i], 1e-10 * std::abs(b.mean[i]));
    EXPECT_NEAR(rec.final_moments.second[i], b.second[i], 1e-10 * b.second[i]);
  }
  EXPECT_EQ(rec.final_moments.count, 5000);
}

TEST(RunChain, AcceptanceFraction) {
  const auto rec = run_chain({20'000, 0, 10, kDefaultMaxRetries}, normal_walk(), constant_acceptance(0.25),
                             at(ParameterPoint{0.0}));
  EXPECT_NEAR(rec.acceptance_fraction(), 0.25, 0.015);
}

TEST(ChainConfig, Validation) {
  EXPECT_THROW((ChainConfig{0, 0, 0, 1}.validate()), ValidationError);
  EXPECT_THROW((ChainConfig{10, 11, 0, 1}.validate()), ValidationError);
  EXPECT_THROW((ChainConfig{10, -1, 0, 1}.validate()), ValidationError);
  EXPECT_NO_THROW((ChainConfig{10, 10, 0, 1}.validate()));
}

TEST(Histogram, IdenticalSamplesFillOneBin) {
  const std::vector<ParameterPoint> s(100, ParameterPoint{0.3});
  const std::vector<std::vector<double>> edges{uniform_edges(0.0, 1.0, 10)};
  const auto h = empirical_density(s, edges);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].counts[3], 100);
  EXPECT_EQ(h[0].total(), 100);
}

TEST(Histogram, UniformSamplesGiveEqualCounts) {
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i) v.push_back((i + 0.5) / 1000.0);
  const auto h = histogram_1d(v, uniform_edges(0.0, 1.0, 10));
  for (auto c : h.counts) EXPECT_EQ(c, 100);
}

TEST(Histogram, OutOfRangeIsClampedAndCounted) {
  const std::vector<double> v{-5.0, 0.5, 2.0, 1.0};
  const auto h = histogram_1d(v, uniform_edges(0.0, 1.0, 2));
  EXPECT_EQ(h.counts[0], 1);
  EXPECT_EQ(h.counts[1], 3);
  EXPECT_EQ(h.clamped, 2);
  EXPECT_EQ(h.total(), 4);
}

TEST(Histogram, RejectsBadEdges) {
  const std::vector<double> v{0.5};
  EXPECT_THROW((void)histogram_1d(v, {0.0, 0.0, 1.0}), ValidationError);
  EXPECT_THROW((void)empirical_density({}, {}), ValidationError);
  EXPECT_THROW((void)constant_acceptance(1.5), ValidationError);
}

TEST(Histogram, NormalCellProbabilities) {
  Rng rng(12);
  const int n = 100'000;
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  const auto edges = uniform_edges(-4.0, 4.0, 20);
  const auto h = histogram_1d(v, edges);
  for (std::size_t b = 0; b < 20; ++b) {
    double p = oracle::normal_cdf(edges[b + 1]) - oracle::normal_cdf(edges[b]);
    // The boundary bins also absorb the clamped tails.
    if (b == 0) p += oracle::normal_cdf(-4.0);
    if (b == 19) p += oracle::normal_cdf(-4.0);
    const double sd = std::sqrt(n * p * (1 - p));
    EXPECT_NEAR(static_cast<double>(h.counts[b]), n * p, 5 * sd + 1) << "bin " << b;
  }
}

TEST(Ensemble, ParallelMatchesSerial) {
  EnsembleSpec spec{500, {1, 10, 50}, 77, kDefaultMaxRetries};
  const auto init = [](Rng& rng) { return ParameterPoint{rng.uniform(-1.0, 1.0)}; };
  const auto a = simulate_ensemble(spec, normal_walk(), constant_acceptance(0.4), init);
  const auto b = simulate_ensemble_serial(spec, normal_walk(), constant_acceptance(0.4), init);
  EXPECT_EQ(a.snapshots, b.snapshots);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.steps, 500 * 50);
  EXPECT_NEAR(a.acceptance_fraction(), 0.4, 0.02);
  EXPECT_EQ(first_coordinates(a.snapshots[0]).size(), 500u);
}

TEST(Ensemble, RejectsUnsortedSnapshots) {
  EnsembleSpec spec{10, {5, 2}, 0, kDefaultMaxRetries};
  EXPECT_THROW(spec.validate(), ValidationError);
}
