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

#include "kmmc/observations.hpp"

#include <algorithm>

#include "kmmc/error.hpp"

namespace kmmc {

std::string to_string(ObservationMode mode) {
  return mode == ObservationMode::fixed_time ? "fixed_time" : "running_time";
}

void ObservationSet::validate() const {
  for (std::size_t i = 1; i < data.size(); ++i)
    if (data[i].t < data[i - 1].t) throw ValidationError("observation times must be nondecreasing");
  if (mode == ObservationMode::fixed_time)
    for (const auto& o : data)
      if (o.t != data.front().t) throw ValidationError("fixed-time observations must share one time");
  for (const auto& o : data)
    if (o.z.size() != data.front().z.size()) throw ValidationError("observation dimensions differ");
}

std::vector<double> ObservationSet::running_max_variance() const {
  std::vector<double> out(data.size() + 1, 0.0);
  if (data.empty()) return out;
  const std::size_t dim = data.front().z.size();
  std::vector<double> sum(dim, 0.0);
  std::vector<double> sum_sq(dim, 0.0);
  for (std::size_t n = 1; n <= data.size(); ++n) {
    const auto& z = data[n - 1].z;
    double worst = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      sum[d] += z[d];
      sum_sq[d] += z[d] * z[d];
      const double mean = sum[d] / static_cast<double>(n);
      worst = std::max(worst, sum_sq[d] / static_cast<double>(n) - mean * mean);
    }
    out[n] = n < 2 ? 0.0 : std::max(0.0, worst);
  }
  return out;
}

}  // namespace kmmc
