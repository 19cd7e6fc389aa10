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

#include "kmmc/histogram.hpp"

#include <algorithm>
#include <numeric>

#include "kmmc/error.hpp"

namespace kmmc {

std::int64_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}); }

std::vector<double> Histogram::probabilities() const {
  const auto n = static_cast<double>(total());
  std::vector<double> p(counts.size(), 0.0);
  if (n > 0)
    for (std::size_t k = 0; k < counts.size(); ++k) p[k] = static_cast<double>(counts[k]) / n;
  return p;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw ValidationError("bin edges must be strictly increasing");
  std::vector<double> edges(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k)
    edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  edges.back() = hi;
  return edges;
}

Histogram histogram_1d(std::span<const double> values, std::vector<double> edges) {
  if (edges.size() < 2) throw ValidationError("bin edges must be strictly increasing");
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (!(edges[k] > edges[k - 1])) throw ValidationError("bin edges must be strictly increasing");

  Histogram h{std::move(edges), {}, 0};
  const std::size_t bins = h.edges.size() - 1;
  h.counts.assign(bins, 0);
  for (double v : values) {
    std::size_t k = 0;
    if (v < h.edges.front()) {
      ++h.clamped;
    } else if (v > h.edges.back()) {
      ++h.clamped;
      k = bins - 1;
    } else {
      const auto it = std::upper_bound(h.edges.begin(), h.edges.end(), v);
      k = std::min<std::size_t>(static_cast<std::size_t>(it - h.edges.begin()) - 1, bins - 1);
    }
    ++h.counts[k];
  }
  return h;
}

std::vector<double> component(std::span<const ParameterPoint> samples, std::size_t dim) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s[dim]);
  return out;
}

std::vector<Histogram> empirical_density(std::span<const ParameterPoint> samples,
                                         std::span<const std::vector<double>> edges) {
  if (samples.empty()) throw ValidationError("empirical density needs at least one sample");
  if (edges.size() != samples.front().size()) throw ValidationError("one edge vector per dimension required");
  std::vector<Histogram> out;
  out.reserve(edges.size());
  for (std::size_t d = 0; d < edges.size(); ++d) out.push_back(histogram_1d(component(samples, d), edges[d]));
  return out;
}

}  // namespace kmmc
