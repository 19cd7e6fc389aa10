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

#include <stdexcept>
#include <string>

namespace kmmc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: configuration values, malformed files, bad arguments.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The forward model could not be evaluated at the requested parameter.
class ModelEvaluationError : public Error {
 public:
  using Error::Error;
};

/// An ODE trajectory left the admissible region (some |v_i| above the blow-up threshold).
class TrajectoryDivergence : public ModelEvaluationError {
 public:
  explicit TrajectoryDivergence(double time)
      : ModelEvaluationError("trajectory divergence at t=" + std::to_string(time)), time_(time) {}

  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace kmmc
