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
#include <memory>
#include <vector>

#include "kmmc/error.hpp"
#include "kmmc/strategies.hpp"

using namespace kmmc;

namespace {

/// v(t, x) = x * t componentwise; a linear mock of the forward model.
ForwardModel linear_model() {
  return [](const ParameterPoint& x, std::span<const double> times) {
    std::vector<std::vector<double>> out;
    for (double t : times) {
      std::vector<double> v;
      for (double c : x) v.push_back(c * t);
      out.push_back(v);
    }
    return out;
  };
}

}  // namespace

TEST(AcceptanceRatio, Examples) {
  EXPECT_EQ(acceptance_ratio(2.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(acceptance_ratio(3.0, 1.0), 0.75);
  const double a = acceptance_ratio(1e12, 1.0);
  EXPECT_LE(a, 1.0);
  EXPECT_NEAR(a, 1.0 - 1e-12, 1e-15);
}

TEST(AcceptanceRatio, SwapSymmetry) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double p = std::exp(rng.uniform(-20.0, 20.0));
    const double n = std::exp(rng.uniform(-20.0, 20.0));
    const double s = acceptance_ratio(p, n) + acceptance_ratio(n, p);
    EXPECT_EQ(s, 1.0);
    EXPECT_GE(acceptance_ratio(p, n), 0.0);
    EXPECT_LE(acceptance_ratio(p, n), 1.0);
  }
}

TEST(AcceptanceRatio, DegenerateLikelihood) {
  try {
    (void)acceptance_ratio(0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "degenerate likelihood");
  }
  EXPECT_THROW((void)acceptance_ratio(1.0, -2.0), Error);
}

TEST(Likelihood, FixedTimeExamples) {
  const auto model = linear_model();
  // v(1, x) = x.
  EXPECT_DOUBLE_EQ(likelihood_fixed_time(ParameterPoint{1.0, 0.0}, {1.0, {0.0, 0.0}}, model), 1.0);
  EXPECT_DOUBLE_EQ(likelihood_fixed_time(ParameterPoint{2.0, 0.0}, {1.0, {0.0, 0.0}}, model), 0.25);
  EXPECT_DOUBLE_EQ(likelihood_fixed_time(ParameterPoint{3.0, 4.0}, {1.0, {3.0, 4.0}}, model), 1e12);
}

TEST(Likelihood, ModelFailureIsReported) {
  const ForwardModel failing = [](const ParameterPoint&, std::span<const double>) -> std::vector<std::vector<double>> {
    throw TrajectoryDivergence(3.5);
  };
  try {
    (void)likelihood_fixed_time(ParameterPoint{1.0}, {1.0, {0.0}}, failing);
    FAIL();
  } catch (const ModelEvaluationError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("model evaluation failed", 0), 0u);
  }
}

TEST(Likelihood, RunningExamples) {
  const auto model = linear_model();
  ObservationSet nu;
  nu.mode = ObservationMode::running_time;
  // x = (1): v(t) = t. Misfits all of norm 1.
  for (int i = 1; i <= 4; ++i) nu.data.push_back({static_cast<double>(i), {i + 1.0}});
  EXPECT_DOUBLE_EQ(likelihood_running(ParameterPoint{1.0}, nu, model, 4), 1.0);
  EXPECT_DOUBLE_EQ(likelihood_running(ParameterPoint{1.0}, nu, model, 1),
                   likelihood_fixed_time(ParameterPoint{1.0}, nu.data[0], model));
  ObservationSet exact;
  exact.mode = ObservationMode::running_time;
  for (int i = 1; i <= 3; ++i) exact.data.push_back({static_cast<double>(i), {2.0 * i}});
  EXPECT_DOUBLE_EQ(likelihood_running(ParameterPoint{2.0}, exact, model, 3), 1e12);
  EXPECT_THROW((void)likelihood_running(ParameterPoint{2.0}, exact, model, 0), ValidationError);
}

TEST(Likelihood, FixedTimeCyclesThroughData) {
  auto data = std::make_shared<ObservationSet>();
  for (int i = 0; i < 3; ++i) data->data.push_back({1.0, {static_cast<double>(i)}});
  const Likelihood lik(ObservationMode::fixed_time, linear_model(), data);
  EXPECT_EQ(lik.fixed_time_index(1), 0u);
  EXPECT_EQ(lik.fixed_time_index(3), 2u);
  EXPECT_EQ(lik.fixed_time_index(4), 0u);
  // x = 1 matches datum 2 (index 1) exactly.
  EXPECT_DOUBLE_EQ(lik(ParameterPoint{1.0}, 2), 1e12);
  EXPECT_DOUBLE_EQ(lik(ParameterPoint{1.0}, 1), 1.0);
}

TEST(Likelihood, RunningUsesDataSeenSoFar) {
  auto data = std::make_shared<ObservationSet>();
  data->mode = ObservationMode::running_time;
  data->data = {{1.0, {1.0}}, {2.0, {4.0}}};
  const Likelihood lik(ObservationMode::running_time, linear_model(), data);
  // x = 1: misfits 0 and 2.
  EXPECT_DOUBLE_EQ(lik(ParameterPoint{1.0}, 1), 1e12);
  EXPECT_DOUBLE_EQ(lik(ParameterPoint{1.0}, 2), 0.5);
  EXPECT_DOUBLE_EQ(lik(ParameterPoint{1.0}, 50), 0.5);
}

TEST(ProjectBox, Examples) {
  const auto box = ProjectionBox::around(ParameterPoint{10.0, 8.0 / 3.0, 28.0});
  const ParameterPoint inside{10.0, 2.5, 30.0};
  EXPECT_EQ(project_box(inside, box), inside);
  const auto p = project_box(ParameterPoint{100.0, 0.0, 0.0}, box);
  EXPECT_DOUBLE_EQ(p[0], 12.5);
  EXPECT_DOUBLE_EQ(p[1], 2.0);
  EXPECT_DOUBLE_EQ(p[2], 21.0);
  EXPECT_EQ(project_box(box.lo, box), box.lo);
}

TEST(ProjectBox, Idempotent) {
  Rng rng(2);
  const auto box = ProjectionBox::around(ParameterPoint{10.0, 8.0 / 3.0, 28.0});
  for (int i = 0; i < 1000; ++i) {
    const ParameterPoint x{rng.normal(10, 10), rng.normal(2, 5), rng.normal(28, 20)};
    const auto once = project_box(x, box);
    EXPECT_EQ(project_box(once, box), once);
  }
}

TEST(ProjectBox, NegativeReferenceOrdersBounds) {
  const auto box = ProjectionBox::around(ParameterPoint{-4.0});
  EXPECT_DOUBLE_EQ(box.lo[0], -5.0);
  EXPECT_DOUBLE_EQ(box.hi[0], -3.0);
  EXPECT_THROW((ProjectionBox{ParameterPoint{1.0}, ParameterPoint{0.0}}.validate()), ValidationError);
}

TEST(GaussianProposal, MomentsWithUnboundedBox) {
  Rng rng(3);
  const ParameterPoint xn{10.0, 1.0, -5.0};
  const auto box = ProjectionBox::unbounded(3);
  const int n = 100'000;
  std::vector<double> s1(3, 0.0), s2(3, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto z = gaussian_proposal(xn, box, rng);
    for (std::size_t j = 0; j < 3; ++j) {
      s1[j] += z[j];
      s2[j] += (z[j] - xn[j]) * (z[j] - xn[j]);
    }
  }
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(s1[j] / n, xn[j], 0.02);
    EXPECT_NEAR(s2[j] / n, 1.0, 0.05);
  }
}

TEST(GaussianProposal, DegenerateBoxPins) {
  Rng rng(4);
  const ProjectionBox box{ParameterPoint{2.0, 3.0}, ParameterPoint{2.0, 3.0}};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(gaussian_proposal(ParameterPoint{0.0, 0.0}, box, rng), (ParameterPoint{2.0, 3.0}));
}

TEST(GradientProposal, ZeroGradientProjects) {
  Rng rng(5);
  const ProjectionBox box{ParameterPoint{0.0}, ParameterPoint{1.0}};
  for (int i = 0; i < 20; ++i) EXPECT_EQ(gradient_proposal(ParameterPoint{3.0}, ParameterPoint{0.0}, box, rng), ParameterPoint{1.0});
}

TEST(GradientProposal, TwoPointMixture) {
  Rng rng(6);
  const auto box = ProjectionBox::unbounded(3);
  const ParameterPoint xn{10.0, 1.0, 10.0};
  const ParameterPoint grad{1.0, 0.0, 0.0};
  int plus = 0;
  const int n = 10'000;
  for (int i = 0; i < n; ++i) {
    const auto p = gradient_proposal(xn, grad, box, rng);
    if (p == ParameterPoint{11.0, 1.0, 10.0}) {
      ++plus;
    } else {
      ASSERT_EQ(p, (ParameterPoint{9.0, 1.0, 10.0}));
    }
  }
  EXPECT_NEAR(static_cast<double>(plus) / n, 0.5, 0.02);
}

TEST(GradientKernel, PassesStepToGradient) {
  std::int64_t seen = -1;
  const auto k = gradient_kernel(
      [&seen](const ParameterPoint&, std::int64_t step) {
        seen = step;
        return ParameterPoint{0.0};
      },
      ProjectionBox::unbounded(1));
  Rng rng(7);
  const ParameterPoint x{1.0};
  const auto m = MomentVector::zero(1);
  EXPECT_EQ(k.sample({x, m, 17}, rng), x);
  EXPECT_EQ(seen, 17);
}

TEST(MetropolisHastings, Examples) {
  const auto tau = gaussian_kernel(ProjectionBox::unbounded(1));
  const TargetDensity flat = [](const ParameterPoint&) { return 1.0; };
  EXPECT_DOUBLE_EQ(metropolis_hastings_acceptance(flat, tau, ParameterPoint{0.3}, ParameterPoint{-1.0}), 1.0);
  const TargetDensity step = [](const ParameterPoint& x) { return x[0] > 0 ? 0.3 : 1.0; };
  EXPECT_NEAR(metropolis_hastings_acceptance(step, tau, ParameterPoint{1.0}, ParameterPoint{-1.0}), 0.3, 1e-15);
  const TargetDensity zero = [](const ParameterPoint&) { return 0.0; };
  EXPECT_EQ(metropolis_hastings_acceptance(zero, tau, ParameterPoint{1.0}, ParameterPoint{0.0}), 1.0);
}

TEST(MetropolisHastings, DetailBalanceIdentity) {
  // Asymmetric proposal: N(0.8 y, 0.7^2).
  const ProposalKernel tau(
      ProposalKind::custom, [](const ProposalContext& c, Rng& rng) { return ParameterPoint{rng.normal(0.8 * c.current[0], 0.7)}; },
      [](const ParameterPoint& to, const ParameterPoint& from) {
        const double u = (to[0] - 0.8 * from[0]) / 0.7;
        return std::exp(-0.5 * u * u) / (0.7 * std::sqrt(2 * M_PI));
      });
  const TargetDensity pi = [](const ParameterPoint& x) { return std::exp(-std::pow(x[0] * x[0] - 1, 2) / 0.2); };
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const ParameterPoint x{rng.uniform(-2, 2)};
    const ParameterPoint y{rng.uniform(-2, 2)};
    const double lhs = metropolis_hastings_acceptance(pi, tau, x, y) * tau.density(x, y) * pi(y);
    const double rhs = metropolis_hastings_acceptance(pi, tau, y, x) * tau.density(y, x) * pi(x);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max({lhs, rhs, 1e-300}));
  }
}

TEST(MetropolisHastings, RuleNeedsDensity) {
  const ProposalKernel no_density(ProposalKind::custom, [](const ProposalContext& c, Rng&) { return c.current; });
  EXPECT_THROW((void)metropolis_hastings_rule([](const ParameterPoint&) { return 1.0; }, no_density), ValidationError);
}

TEST(LikelihoodRatioRule, ValuesInUnitInterval) {
  auto data = std::make_shared<ObservationSet>();
  data->data = {{1.0, {0.5, -0.5}}};
  const auto rule = likelihood_ratio_acceptance(Likelihood(ObservationMode::fixed_time, linear_model(), data));
  Rng rng(9);
  const auto m = MomentVector::zero(2);
  for (int i = 0; i < 200; ++i) {
    const ParameterPoint a{rng.normal(0, 3), rng.normal(0, 3)};
    const ParameterPoint b{rng.normal(0, 3), rng.normal(0, 3)};
    const double v = rule({a, m, b, m, 1});
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}
