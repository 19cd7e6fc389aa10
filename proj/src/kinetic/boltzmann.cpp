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

#include "kmmc/kinetic/boltzmann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <Eigen/Dense>

#include "kmmc/error.hpp"

namespace kmmc::kinetic {

KernelGrid::KernelGrid(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)), loss_(grid.cells, 0.0) {
  const std::size_t m = grid_.cells;
  if (values_.size() != m * m) throw ValidationError("kernel size does not match grid");
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("kernel entries must be finite and nonnegative");
  const double dx = grid_.dx();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) loss_[j] += values_[i * m + j] * dx;
  max_loss_ = m == 0 ? 0.0 : *std::max_element(loss_.begin(), loss_.end());
}

KernelGrid KernelGrid::scaled(double factor) const {
  if (!(factor >= 0.0)) throw ValidationError("kernel scale must be nonnegative");
  std::vector<double> v = values_;
  for (double& e : v) e *= factor;
  return {grid_, std::move(v)};
}

KernelGrid build_kernel(const AcceptanceFn& alpha, const ProposalDensityFn& tau, const Grid& grid) {
  const std::size_t m = grid.cells;
  const double dx = grid.dx();
  std::vector<double> k(m * m);
  std::vector<double> col(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = grid.center(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double y = grid.center(j);
      const double t = tau(x, y);
      const double a = alpha(x, y);
      if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("invalid acceptance value");
      col[j] += t * dx;
      k[i * m + j] = a * t;
    }
  }
  for (double c : col)
    if (!(std::abs(c - 1.0) <= 1e-3)) throw ValidationError("proposal density not normalized on grid");
  return {grid, std::move(k)};
}

double max_boltzmann_step(const KernelGrid& k) {
  return k.max_loss() > 0.0 ? 0.9 / k.max_loss() : std::numeric_limits<double>::infinity();
}

namespace {
double generator_row(const KernelGrid& k, std::span<const double> f, std::size_t i) {
  const std::size_t m = k.size();
  const auto row = k.values().subspan(i * m, m);
  double gain = 0.0;
  for (std::size_t j = 0; j < m; ++j) gain += row[j] * f[j];
  return gain * k.grid().dx() - f[i] * k.loss(i);
}

void check_size(const KernelGrid& k, std::span<const double> f) {
  if (f.size() != k.size()) throw ValidationError("density size does not match kernel");
}
}  // namespace

std::vector<double> apply_generator(const KernelGrid& k, std::span<const double> f) {
  check_size(k, f);
  const auto m = static_cast<std::ptrdiff_t>(k.size());
  std::vector<double> out(k.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) out[i] = generator_row(k, f, static_cast<std::size_t>(i));
  return out;
}

std::vector<double> apply_generator_serial(const KernelGrid& k, std::span<const double> f) {
  check_size(k, f);
  std::vector<double> out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) out[i] = generator_row(k, f, i);
  return out;
}

GridDensity boltzmann_step(const GridDensity& f, const KernelGrid& k, double ds) {
  if (!(f.grid == k.grid())) throw ValidationError("density and kernel live on different grids");
  if (!(ds >= 0.0)) throw ValidationError("step must be nonnegative");
  if (ds > max_boltzmann_step(k) * (1.0 + 1e-12)) throw ValidationError("step too large");
  const std::vector<double> q = apply_generator(k, f.values);
  GridDensity out = f;
  for (std::size_t i = 0; i < q.size(); ++i) out.values[i] += ds * q[i];
  return out;
}

namespace {

/// Every cell reachable from cell 0 along positive entries, following `forward`
/// (j -> i when K(i,j) > 0) or the reversed edges.
bool reaches_all(const KernelGrid& k, bool forward) {
  const std::size_t m = k.size();
  std::vector<char> seen(m, 0);
  std::queue<std::size_t> todo;
  seen[0] = 1;
  todo.push(0);
  std::size_t count = 1;
  while (!todo.empty()) {
    const std::size_t u = todo.front();
    todo.pop();
    for (std::size_t v = 0; v < m; ++v) {
      if (seen[v] || v == u) continue;
      const double w = forward ? k(v, u) : k(u, v);
      if (w > 0.0) {
        seen[v] = 1;
        ++count;
        todo.push(v);
      }
    }
  }
  return count == m;
}

/// log f_inf by chaining f(i)/f(j) = K(i,j)/K(j,i) over pairs with both
/// directions positive. Empty when those pairs do not connect the grid.
std::vector<double> chained_log_density(const KernelGrid& k) {
  const std::size_t m = k.size();
  std::vector<double> logf(m, 0.0);
  std::vector<char> seen(m, 0);
  std::queue<std::size_t> todo;
  seen[0] = 1;
  todo.push(0);
  std::size_t count = 1;
  while (!todo.empty()) {
    const std::size_t j = todo.front();
    todo.pop();
    for (std::size_t i = 0; i < m; ++i) {
      if (seen[i] || !(k(i, j) > 0.0) || !(k(j, i) > 0.0)) continue;
      logf[i] = logf[j] + std::log(k(i, j)) - std::log(k(j, i));
      seen[i] = 1;
      ++count;
      todo.push(i);
    }
  }
  if (count != m) return {};
  return logf;
}

GridDensity from_log(const Grid& grid, const std::vector<double>& logf) {
  const double top = *std::max_element(logf.begin(), logf.end());
  std::vector<double> v(logf.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(logf[i] - top);
  GridDensity f(grid, std::move(v));
  f.normalize();
  return f;
}

GridDensity null_vector(const KernelGrid& k) {
  const auto m = static_cast<Eigen::Index>(k.size());
  const double dx = k.grid().dx();
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      g(i, j) = k(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * dx;
  for (Eigen::Index j = 0; j < m; ++j) g(j, j) -= k.loss(static_cast<std::size_t>(j));
  // The generator has rank m-1; replace one balance equation by the mass constraint.
  g.row(m - 1).setConstant(dx);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(m - 1) = 1.0;
  const Eigen::VectorXd f = g.fullPivLu().solve(rhs);
  std::vector<double> v(f.data(), f.data() + m);
  for (double& e : v) e = std::max(e, 0.0);
  GridDensity out(k.grid(), std::move(v));
  out.normalize();
  return out;
}

}  // namespace

double detail_balance_residual(const KernelGrid& k, const GridDensity& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = i + 1; j < k.size(); ++j) {
      const double a = k(i, j) * f.values[j];
      const double b = k(j, i) * f.values[i];
      const double scale = std::max(std::abs(a), std::abs(b));
      if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
    }
  return worst;
}

GridDensity stationary_detail_balance(const KernelGrid& k) {
  if (k.size() == 0) throw ValidationError("empty kernel");
  if (k.size() > 1 && (!reaches_all(k, true) || !reaches_all(k, false))) throw Error("no unique stationary density");
  if (k.size() == 1) return GridDensity(k.grid(), {1.0 / k.grid().dx()});
  const std::vector<double> logf = chained_log_density(k);
  if (!logf.empty()) {
    GridDensity f = from_log(k.grid(), logf);
    if (detail_balance_residual(k, f) <= 1e-10) return f;
  }
  return null_vector(k);
}

double entropy(const GridDensity& f, const GridDensity& f_inf) {
  if (!(f.grid == f_inf.grid)) throw ValidationError("densities live on different grids");
  double h = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!(f_inf.values[i] > 0.0)) throw ValidationError("entropy needs a positive reference density");
    h += f.values[i] * f.values[i] / f_inf.values[i];
  }
  return h * f.grid.dx();
}

}  // namespace kmmc::kinetic
