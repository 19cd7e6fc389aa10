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

#include "kmmc/kinetic/micromacro_grid.hpp"

#include "kmmc/error.hpp"

namespace kmmc::kinetic {

ZetaPath ZetaPath::constant(double z) {
  return {[z](double) { return z; }, [](double) { return 0.0; }};
}

ZetaPath ZetaPath::linear(double z0, double slope) {
  return {[z0, slope](double s) { return z0 + slope * s; }, [slope](double) { return slope; }};
}

namespace {

double checked_zeta(const ZetaPath& path, double s) {
  const double z = path.zeta(s);
  if (!(z > 0.0 && z < 1.0)) throw Error("splitting degenerate");
  return z;
}

GridDensity combine(const GridDensity& a, double wa, const GridDensity& b, double wb) {
  GridDensity out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = wa * a.values[i] + wb * b.values[i];
  return out;
}

}  // namespace

MicroMacroGridResult solve_micromacro_grid(const KernelGrid& q, GammaChoice gamma, const ZetaPath& path,
                                           const GridDensity& f_micro0, const GridDensity& f_macro0, double ds,
                                           std::size_t steps) {
  if (!path.zeta || !path.derivative) throw ValidationError("zeta path is incomplete");
  if (!(f_micro0.grid == q.grid()) || !(f_macro0.grid == q.grid()))
    throw ValidationError("densities and kernel live on different grids");
  if (!(ds > 0.0)) throw ValidationError("step must be positive");

  MicroMacroGridResult out;
  out.micro.reserve(steps + 1);
  out.macro.reserve(steps + 1);
  out.combined.reserve(steps + 1);
  out.times.reserve(steps + 1);

  GridDensity fm = f_micro0;
  GridDensity fM = f_macro0;
  double zeta = checked_zeta(path, 0.0);
  auto record = [&](double s) {
    out.micro.push_back(fm);
    out.macro.push_back(fM);
    out.combined.push_back(combine(fm, zeta, fM, 1.0 - zeta));
    out.times.push_back(s);
  };
  record(0.0);

  for (std::size_t k = 0; k < steps; ++k) {
    const double s = static_cast<double>(k) * ds;
    const double g = gamma.at(zeta);
    const double dz = path.derivative(s);

    const GridDensity micro_arg = combine(fm, g, fM, 1.0 - g);
    const GridDensity macro_arg =
        combine(fm, zeta * (1.0 - g) / (1.0 - zeta), fM, (1.0 - 2.0 * zeta + zeta * g) / (1.0 - zeta));
    const std::vector<double> q_micro = apply_generator(q, micro_arg.values);
    const std::vector<double> q_macro = apply_generator(q, macro_arg.values);
    const double relax = dz / (1.0 - zeta);

    for (std::size_t i = 0; i < fm.values.size(); ++i) {
      const double diff = fm.values[i] - fM.values[i];
      fm.values[i] += ds * q_micro[i];
      fM.values[i] += ds * (q_macro[i] - relax * diff);
    }
    const double s_next = static_cast<double>(k + 1) * ds;
    zeta = checked_zeta(path, s_next);
    record(s_next);
  }
  return out;
}

std::vector<GridDensity> boltzmann_evolve(const GridDensity& f0, const KernelGrid& q, double ds, std::size_t steps) {
  std::vector<GridDensity> out;
  out.reserve(steps + 1);
  out.push_back(f0);
  for (std::size_t k = 0; k < steps; ++k) out.push_back(boltzmann_step(out.back(), q, ds));
  return out;
}

}  // namespace kmmc::kinetic
