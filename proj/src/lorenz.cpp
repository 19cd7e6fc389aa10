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

#include "kmmc/lorenz.hpp"

#include <algorithm>
#include <cmath>

#include "kmmc/error.hpp"
#include "kmmc/rng.hpp"

namespace kmmc::lorenz {

LorenzParams LorenzParams::from(const ParameterPoint& x) {
  if (x.size() != 3) throw ValidationError("Lorenz parameters must be 3-dimensional");
  return {x[0], x[1], x[2]};
}

State rhs(const State& v, const LorenzParams& p, Variant variant) {
  if (variant == Variant::classical)
    return {p.a * (v[1] - v[0]), p.c * v[0] - v[1] - v[0] * v[2], v[0] * v[1] - p.b * v[2]};
  return {p.a * (v[1] - v[0]), -p.a * v[0] - v[1] - v[0] * v[2], v[0] * v[1] - p.b * v[2] - p.b * (p.c + p.a)};
}

void Rk23Options::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ValidationError("integrator tolerances must be positive");
  if (!(blow_up > 0.0)) throw ValidationError("blow-up threshold must be positive");
}

namespace {

State axpy(const State& y, double h, const State& k) { return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]}; }

double scaled_max(const State& e, const State& y0, const State& y1, const Rk23Options& o) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double sc = o.abs_tol + o.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    m = std::max(m, std::abs(e[i]) / sc);
  }
  return m;
}

State hermite(const State& y0, const State& f0, const State& y1, const State& f1, double h, double theta) {
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + theta;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  State out{};
  for (int i = 0; i < 3; ++i) out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  return out;
}

bool diverged(const State& y, double threshold) {
  return std::any_of(y.begin(), y.end(), [&](double c) { return !std::isfinite(c) || std::abs(c) > threshold; });
}

double initial_step(const Rhs& f, double t0, const State& y0, const State& f0, double span, const Rk23Options& o) {
  double d0 = 0.0;
  double d1 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double sc = o.abs_tol + o.rel_tol * std::abs(y0[i]);
    d0 = std::max(d0, std::abs(y0[i]) / sc);
    d1 = std::max(d1, std::abs(f0[i]) / sc);
  }
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  const State y1 = axpy(y0, h0, f0);
  const State f1 = f(t0 + h0, y1);
  double d2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double sc = o.abs_tol + o.rel_tol * std::abs(y0[i]);
    d2 = std::max(d2, std::abs(f1[i] - f0[i]) / sc / h0);
  }
  const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::cbrt(0.01 / std::max(d1, d2));
  return std::min({100 * h0, h1, span});
}

}  // namespace

Trajectory integrate_rk23(const Rhs& f, const State& v0, double t0, double t1, std::span<const double> output_times,
                          const Rk23Options& options) {
  options.validate();
  if (!(t1 >= t0)) throw ValidationError("integration interval must satisfy t1 >= t0");
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    if (output_times[i] < t0 || output_times[i] > t1) throw ValidationError("output time outside integration interval");
    if (i > 0 && output_times[i] < output_times[i - 1]) throw ValidationError("output times must be ascending");
  }

  Trajectory traj;
  const bool dense = output_times.empty();
  std::size_t next_out = 0;
  auto emit_until = [&](double t_hi, double t_lo, const State& y0, const State& f0, const State& y1, const State& f1,
                        double h) {
    while (next_out < output_times.size() && output_times[next_out] <= t_hi) {
      const double tq = output_times[next_out];
      traj.times.push_back(tq);
      if (tq == t_hi)
        traj.states.push_back(y1);
      else if (h <= 0.0 || tq == t_lo)
        traj.states.push_back(y0);
      else
        traj.states.push_back(hermite(y0, f0, y1, f1, h, (tq - t_lo) / h));
      ++next_out;
    }
  };

  double t = t0;
  State y = v0;
  if (diverged(y, options.blow_up)) throw TrajectoryDivergence(t);
  State k1 = f(t, y);
  if (dense) {
    traj.times.push_back(t);
    traj.states.push_back(y);
  } else {
    emit_until(t, t, y, k1, y, k1, 0.0);
  }
  if (t1 == t0) return traj;

  double h = initial_step(f, t, y, k1, t1 - t0, options);
  while (t < t1) {
    if (traj.accepted_steps + traj.rejected_steps >= options.max_steps)
      throw ModelEvaluationError("integrator step limit reached");
    const double min_step = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < min_step) throw TrajectoryDivergence(t);
    const bool last = t + h >= t1;
    if (last) h = t1 - t;

    const State k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State k3 = f(t + 0.75 * h, axpy(y, 0.75 * h, k2));
    State y_new{};
    for (int i = 0; i < 3; ++i) y_new[i] = y[i] + h * (2.0 / 9.0 * k1[i] + 1.0 / 3.0 * k2[i] + 4.0 / 9.0 * k3[i]);
    const double t_new = last ? t1 : t + h;
    if (diverged(y_new, options.blow_up)) throw TrajectoryDivergence(t_new);
    const State k4 = f(t_new, y_new);
    State err{};
    for (int i = 0; i < 3; ++i)
      err[i] = h * (-5.0 / 72.0 * k1[i] + 1.0 / 12.0 * k2[i] + 1.0 / 9.0 * k3[i] - 1.0 / 8.0 * k4[i]);
    const double e = scaled_max(err, y, y_new, options);

    if (e <= 1.0) {
      ++traj.accepted_steps;
      if (dense) {
        traj.times.push_back(t_new);
        traj.states.push_back(y_new);
      } else {
        emit_until(t_new, t, y, k1, y_new, k4, h);
      }
      t = t_new;
      y = y_new;
      k1 = k4;
      const double factor = e == 0.0 ? 5.0 : std::clamp(0.9 * std::cbrt(1.0 / e), 0.2, 5.0);
      h *= factor;
    } else {
      ++traj.rejected_steps;
      h *= std::max(0.2, 0.9 * std::cbrt(1.0 / e));
    }
  }
  return traj;
}

LorenzModel::LorenzModel(Variant variant, Rk23Options options, State initial)
    : variant_(variant), options_(options), initial_(initial) {
  options_.validate();
}

std::vector<State> LorenzModel::evaluate(const ParameterPoint& x, std::span<const double> times) const {
  if (times.empty()) return {};
  const LorenzParams p = LorenzParams::from(x);
  if (!x.all_finite()) throw ModelEvaluationError("non-finite parameter");
  const Variant variant = variant_;
  const Rhs f = [p, variant](double, const State& v) { return rhs(v, p, variant); };
  const double t_end = *std::max_element(times.begin(), times.end());
  Trajectory traj = integrate_rk23(f, initial_, 0.0, t_end, times, options_);
  return std::move(traj.states);
}

State LorenzModel::at(const ParameterPoint& x, double t) const {
  return evaluate(x, std::span<const double>(&t, 1)).front();
}

ForwardModel LorenzModel::as_forward_model() const {
  return [model = *this](const ParameterPoint& x, std::span<const double> times) {
    std::vector<std::vector<double>> out;
    for (const State& s : model.evaluate(x, times)) out.emplace_back(s.begin(), s.end());
    return out;
  };
}

namespace {
ParameterPoint perturbed(const LorenzParams& x_star, const std::array<double, 3>& amplitudes, Rng& rng) {
  ParameterPoint p = x_star.point();
  for (std::size_t j = 0; j < 3; ++j) p[j] += rng.uniform(-amplitudes[j], amplitudes[j]);
  return p;
}

void check_amplitudes(const std::array<double, 3>& amplitudes) {
  for (double a : amplitudes)
    if (!(a >= 0.0)) throw ValidationError("perturbation amplitudes must be nonnegative");
}
}  // namespace

ObservationSet generate_observations(const LorenzModel& model, const LorenzParams& x_star,
                                     const std::array<double, 3>& amplitudes, std::size_t k_max, ObservationMode mode,
                                     double horizon, std::uint64_t seed) {
  if (k_max == 0) throw ValidationError("K_max must be positive");
  if (!(horizon > 0.0)) throw ValidationError("T must be positive");
  check_amplitudes(amplitudes);

  constexpr int kMaxRedraws = 100;
  ObservationSet set;
  set.mode = mode;
  set.amplitudes.assign(amplitudes.begin(), amplitudes.end());
  set.seed = seed;
  set.data.reserve(k_max);
  Rng rng(seed, streams::observations);
  const double dt = horizon / static_cast<double>(k_max);

  for (std::size_t i = 1; i <= k_max; ++i) {
    const double t = mode == ObservationMode::fixed_time ? horizon : (i == k_max ? horizon : static_cast<double>(i) * dt);
    for (int attempt = 0;; ++attempt) {
      const ParameterPoint p = perturbed(x_star, amplitudes, rng);
      try {
        const State z = model.at(p, t);
        set.data.push_back({t, {z[0], z[1], z[2]}});
        break;
      } catch (const ModelEvaluationError&) {
        if (attempt + 1 >= kMaxRedraws) throw Error("could not draw a non-divergent observation");
      }
    }
  }
  return set;
}

std::vector<ParameterPoint> startup_samples(const LorenzParams& x_star, const std::array<double, 3>& amplitudes,
                                            std::size_t count, std::uint64_t seed) {
  check_amplitudes(amplitudes);
  Rng rng(seed, streams::startup);
  std::vector<ParameterPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(perturbed(x_star, amplitudes, rng));
  return out;
}

Matrix3 jacobian_single_euler(const State& v0, const LorenzParams& p, double t_star, JacobianForm form,
                              Variant variant) {
  if (!(t_star >= 0.0)) throw ValidationError("t* must be nonnegative");
  Matrix3 m{};
  if (variant == Variant::classical) {
    m[0] = {v0[1] - v0[0], 0.0, 0.0};
    m[1] = {0.0, 0.0, v0[0]};
    m[2] = {0.0, -v0[2], 0.0};
  } else {
    const double db3 = form == JacobianForm::reduced ? -(p.c + p.a) : -v0[2] - (p.c + p.a);
    m[0] = {v0[1] - v0[0], 0.0, 0.0};
    m[1] = {-v0[0], 0.0, 0.0};
    m[2] = {-p.b, db3, -p.b};
  }
  for (auto& row : m)
    for (double& e : row) e *= t_star;
  return m;
}

ParameterPoint likelihood_gradient(const State& misfit, const Matrix3& jacobian, double floor) {
  const double sq = misfit[0] * misfit[0] + misfit[1] * misfit[1] + misfit[2] * misfit[2];
  ParameterPoint g(3, 0.0);
  if (!(sq > floor)) return g;
  const double scale = -2.0 / (sq * sq);
  for (std::size_t i = 0; i < 3; ++i) {
    double dot = 0.0;
    for (std::size_t k = 0; k < 3; ++k) dot += misfit[k] * jacobian[k][i];
    g[i] = scale * dot;
  }
  return g;
}

ParameterPoint likelihood_gradient(const ParameterPoint& xn, const Observation& z, const LorenzModel& model,
                                   JacobianForm form, double floor) {
  if (z.z.size() != 3) throw ValidationError("Lorenz observations must be 3-dimensional");
  const State v = model.at(xn, z.t);
  const State d{v[0] - z.z[0], v[1] - z.z[1], v[2] - z.z[2]};
  const Matrix3 j = jacobian_single_euler(model.initial_state(), LorenzParams::from(xn), z.t, form, model.variant());
  return likelihood_gradient(d, j, floor);
}

}  // namespace kmmc::lorenz
