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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kmmc/point.hpp"

namespace kmmc {

enum class ObservationMode { fixed_time, running_time };

[[nodiscard]] std::string to_string(ObservationMode mode);

struct Observation {
  double t = 0.0;
  std::vector<double> z;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// The data set nu = {(t_i, z_i)}.
struct ObservationSet {
  std::vector<Observation> data;
  ObservationMode mode = ObservationMode::fixed_time;
  /// Half-widths of the uniform parameter perturbation used to generate the data.
  std::vector<double> amplitudes;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t size() const noexcept { return data.size(); }

  /// Checks nondecreasing times and, in fixed-time mode, a single common time.
  void validate() const;

  /// sigma_nu^2 after n data: the largest componentwise (population) variance
  /// of z_1..z_n. Entry n of the result, n = 0..size(); zero for n < 2.
  [[nodiscard]] std::vector<double> running_max_variance() const;
};

/// Maps a parameter to model outputs at the requested times.
/// Throws ModelEvaluationError when the model cannot be evaluated.
using ForwardModel = std::function<std::vector<std::vector<double>>(const ParameterPoint&, std::span<const double>)>;

}  // namespace kmmc
