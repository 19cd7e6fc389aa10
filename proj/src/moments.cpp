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

#include "kmmc/moments.hpp"

#include <algorithm>

#include "kmmc/error.hpp"

namespace kmmc {

double MomentVector::variance(std::size_t i) const {
  if (count == 0) return 0.0;
  return std::max(0.0, second[i] - first[i] * first[i]);
}

double MomentVector::max_variance() const {
  double v = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) v = std::max(v, variance(i));
  return v;
}

MomentVector update_moments(const ParameterPoint& x, const MomentVector& kappa) {
  if (!x.all_finite()) throw ValidationError("invalid parameter");
  if (kappa.count < 0) throw ValidationError("moment count must be nonnegative");

  MomentVector next = kappa.count == 0 && kappa.dim() == 0 ? MomentVector::zero(x.size()) : kappa;
  if (next.dim() != x.size()) throw ValidationError("moment dimension does not match parameter dimension");

  const auto n = static_cast<double>(kappa.count);
  for (std::size_t i = 0; i < x.size(); ++i) {
    next.first[i] = (x[i] + n * next.first[i]) / (n + 1.0);
    next.second[i] = (x[i] * x[i] + n * next.second[i]) / (n + 1.0);
  }
  next.count = kappa.count + 1;
  return next;
}

}  // namespace kmmc
