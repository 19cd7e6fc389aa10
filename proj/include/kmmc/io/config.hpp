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

// Run configuration: a flat `key = value` file. Blank lines and lines starting
// with '#' are ignored; lists are comma separated. Unknown keys are rejected.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "kmmc/kinetic/fokker_planck.hpp"
#include "kmmc/lorenz.hpp"

namespace kmmc::io {

enum class Experiment { fixed_time, running_time, verify_boltzmann, verify_fpe, verify_detail_balance, micromacro_grid };
enum class ProposalChoice { gaussian, gradient };
enum class GammaSelection { one, zeta, both };

[[nodiscard]] std::string to_string(Experiment e);

struct RunConfig {
  Experiment experiment = Experiment::fixed_time;

  // Lorenz problem.
  std::int64_t N = 10'000;
  std::int64_t burn_in = 1000;
  double T = 25.0;
  std::int64_t K_max = 10'000;
  std::int64_t N0 = 100;
  std::array<double, 3> a_vec{10.0, 1.0, 10.0};
  std::array<double, 3> x_star{10.0, 8.0 / 3.0, 28.0};
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  /// Observation CSV to ingest instead of generating data; empty to generate.
  std::string data;

  ProposalChoice proposal = ProposalChoice::gaussian;
  double proposal_scale = 1.0;
  double box_lo = 0.75;
  double box_hi = 1.25;
  bool micromacro = false;
  double zeta0 = 0.5;
  lorenz::Variant model = lorenz::Variant::shifted;
  lorenz::JacobianForm jacobian = lorenz::JacobianForm::variational;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  std::int64_t bins = 30;

  // Kinetic verification.
  std::vector<double> h_list{0.2, 0.1, 0.05};
  std::int64_t ensemble = 10'000;
  std::int64_t coarse_bins = 10;
  double alpha_scale = 4.0;
  kinetic::RejectionDiffusion fpe_diffusion = kinetic::RejectionDiffusion::one_plus_beta;

  // Grid micro-macro splitting.
  GammaSelection gamma = GammaSelection::both;
  double zeta_start = 0.3;
  double zeta_slope = 0.2;
  double grid_ds = 0.01;
  double horizon = 1.0;

  /// Throws ValidationError naming the offending key.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the key-value text. Missing keys keep their defaults.
[[nodiscard]] RunConfig parse_config(std::istream& in);
[[nodiscard]] RunConfig parse_config(const std::string& text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Every key with its value, in a fixed order; parse_config(echo(c)) == c.
[[nodiscard]] std::string echo(const RunConfig& config);

/// All recognized keys, in echo order.
[[nodiscard]] std::vector<std::string> config_keys();

/// %.17g formatting.
[[nodiscard]] std::string format_double(double v);

}  // namespace kmmc::io
