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

// Lorenz-63 parameter identification: forward model, adaptive integrator,
// synthetic data, and the approximate likelihood gradient.
//
// The default system is the variant
//   v1' = a (v2 - v1)
//   v2' = -a v1 - v2 - v1 v3
//   v3' = v1 v2 - b v3 - b (c + a)
// which is the classical system shifted by v3 -> v3 - (c + a). The classical
// form is available as Variant::classical.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kmmc/observations.hpp"
#include "kmmc/point.hpp"

namespace kmmc::lorenz {

using State = std::array<double, 3>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

inline constexpr State kInitialState{1.0, 1.0, 1.0};
inline constexpr double kBlowUpThreshold = 1e8;

struct LorenzParams {
  double a = 10.0;
  double b = 8.0 / 3.0;
  double c = 28.0;

  static LorenzParams from(const ParameterPoint& x);
  [[nodiscard]] ParameterPoint point() const { return ParameterPoint{a, b, c}; }
};

/// x* = (10, 8/3, 28).
inline constexpr LorenzParams kReferenceParams{};

/// shifted: (a(v2 - v1), -a v1 - v2 - v1 v3, v1 v2 - b v3 - b(c + a)).
/// classical: the usual Lorenz system with (sigma, beta, rho) = (a, b, c).
enum class Variant { shifted, classical };

[[nodiscard]] State rhs(const State& v, const LorenzParams& p, Variant variant = Variant::shifted);

using Rhs = std::function<State(double t, const State& v)>;

struct Rk23Options {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double blow_up = kBlowUpThreshold;
  std::size_t max_steps = 50'000'000;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

/// Adaptive Bogacki-Shampine 3(2) integration of v' = rhs(t, v) on [t0, t1].
///
/// With empty `output_times` every accepted step is recorded (dense list);
/// otherwise the state is reported exactly at the requested, ascending times
/// by cubic Hermite interpolation inside each step. Throws
/// TrajectoryDivergence when a component exceeds options.blow_up.
[[nodiscard]] Trajectory integrate_rk23(const Rhs& f, const State& v0, double t0, double t1,
                                        std::span<const double> output_times = {}, const Rk23Options& options = {});

/// The Lorenz system as a ForwardModel started from v(0) = (1, 1, 1).
class LorenzModel {
 public:
  explicit LorenzModel(Variant variant = Variant::shifted, Rk23Options options = {},
                       State initial = kInitialState);

  /// States at the requested ascending times (all >= 0).
  [[nodiscard]] std::vector<State> evaluate(const ParameterPoint& x, std::span<const double> times) const;
  [[nodiscard]] State at(const ParameterPoint& x, double t) const;
  [[nodiscard]] ForwardModel as_forward_model() const;

  [[nodiscard]] Variant variant() const noexcept { return variant_; }
  [[nodiscard]] const State& initial_state() const noexcept { return initial_; }
  [[nodiscard]] const Rk23Options& options() const noexcept { return options_; }

 private:
  Variant variant_;
  Rk23Options options_;
  State initial_;
};

/// Synthetic data z_i = v(t_i, x* + xi_i) with xi_i ~ prod_j U(-a^j, a^j).
///
/// Fixed-time mode observes every datum at `horizon`; running-time mode at
/// t_i = i * horizon / k_max. A perturbed draw whose trajectory diverges is
/// redrawn, at most 100 times per datum.
[[nodiscard]] ObservationSet generate_observations(const LorenzModel& model, const LorenzParams& x_star,
                                                   const std::array<double, 3>& amplitudes, std::size_t k_max,
                                                   ObservationMode mode, double horizon, std::uint64_t seed);

/// Draws the N0 startup parameters x* + xi_i.
[[nodiscard]] std::vector<ParameterPoint> startup_samples(const LorenzParams& x_star,
                                                          const std::array<double, 3>& amplitudes, std::size_t count,
                                                          std::uint64_t seed);

enum class JacobianForm {
  /// One explicit Euler step of the variational system from dv/dx(0) = 0:
  /// t* times the parameter partials of the right-hand side at v0.
  variational,
  /// Same, but with the (3,2) entry -(c + a) that drops the -v3 term.
  reduced,
};

/// Single-Euler-step approximation of dv/dx(t*) about the initial state v0.
[[nodiscard]] Matrix3 jacobian_single_euler(const State& v0, const LorenzParams& p, double t_star,
                                            JacobianForm form = JacobianForm::variational,
                                            Variant variant = Variant::shifted);

/// Gradient of L = 1/||d||^2 with respect to x given the misfit d = v - z and
/// the Jacobian J = dv/dx: -2/||d||^4 * J^T d. Zero when ||d||^2 <= floor.
[[nodiscard]] ParameterPoint likelihood_gradient(const State& misfit, const Matrix3& jacobian,
                                                 double floor = 1e-12);

/// Fixed-time likelihood gradient at x_n against datum z (observed at z.t).
[[nodiscard]] ParameterPoint likelihood_gradient(const ParameterPoint& xn, const Observation& z,
                                                 const LorenzModel& model, JacobianForm form = JacobianForm::variational,
                                                 double floor = 1e-12);

}  // namespace kmmc::lorenz
