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

// Experiment orchestration: runs a configured experiment and writes its
// artifacts into the output directory.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kmmc/io/config.hpp"
#include "kmmc/kinetic/verify.hpp"
#include "kmmc/micromacro.hpp"
#include "kmmc/observations.hpp"
#include "kmmc/sampler.hpp"

namespace kmmc::io {

struct RunReport {
  std::string experiment;
  std::string config_echo;
  bool ok = true;
  std::string error;

  double acceptance_fraction = 0.0;
  double macro_fraction = 0.0;
  std::vector<double> posterior_mean;
  std::vector<double> posterior_variance;
  /// v(T, x*).
  std::vector<double> true_mean;
  /// v(T, x_bar) for the posterior mean and for the mean of P0.
  std::vector<double> posterior_pushforward;
  std::vector<double> initial_pushforward;
  double posterior_distance = 0.0;
  double initial_distance = 0.0;

  std::vector<kinetic::InvariantCheck> checks;
  std::vector<kinetic::ConvergenceReport> convergence;
  double wall_seconds = 0.0;

  /// Everything except the wall time, so reruns produce identical files.
  [[nodiscard]] std::string to_text() const;
  [[nodiscard]] bool all_checks_pass() const;
};

/// Observation set for the configured scenario (running_time experiments
/// produce running-time data, everything else fixed-time data).
[[nodiscard]] ObservationSet make_observations(const RunConfig& config);

struct LorenzRun {
  ChainRecord chain;
  std::optional<MicroMacroRecord> micromacro;
  std::vector<ParameterPoint> startup;
  RunReport report;
};

/// The Lorenz identification run without any file output.
[[nodiscard]] LorenzRun run_lorenz(const RunConfig& config, const ObservationSet& data);

/// Runs config.experiment, writing artifacts and report.txt into config.out_dir.
/// The report is written even when the run fails; the error is then rethrown.
RunReport run_experiment(const RunConfig& config);

/// Writes plot.py into `dir`, rendering one panel per hist_*.csv file.
/// Throws ValidationError listing the missing inputs when there are none.
std::filesystem::path emit_plot_script(const std::filesystem::path& dir);

}  // namespace kmmc::io
