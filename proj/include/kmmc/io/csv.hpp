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

// CSV artifacts. Every file has a header row, LF line endings and floats at
// 17 significant digits.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kmmc/histogram.hpp"
#include "kmmc/micromacro.hpp"
#include "kmmc/observations.hpp"
#include "kmmc/sampler.hpp"

namespace kmmc::io {

/// iter, accepted, x_1..x_N [, branch]. `branches` may be empty.
void write_chain_csv(std::ostream& os, const ChainRecord& record, std::span<const Branch> branches = {});
void write_chain_csv(const std::filesystem::path& path, const ChainRecord& record,
                     std::span<const Branch> branches = {});

/// t, z1, z2, ... plus a sidecar `<path>.meta` with seed, mode and amplitudes.
void write_observations(const std::filesystem::path& path, const ObservationSet& set);
/// Parses a t, z1, .. file. The mode is fixed_time when all times agree.
/// Seed and amplitudes are taken from the sidecar when present.
[[nodiscard]] ObservationSet ingest_observations(const std::filesystem::path& path);
[[nodiscard]] ObservationSet parse_observations(std::istream& in);
[[nodiscard]] std::filesystem::path meta_path(const std::filesystem::path& csv);

/// iter, zeta, r.
void write_zeta_csv(const std::filesystem::path& path, std::span<const ZetaRecord> history);

/// bin_lo, bin_hi, initial, final: bin fractions of two histograms on shared edges.
void write_histogram_pair(const std::filesystem::path& path, const Histogram& initial, const Histogram& final);

/// name, value rows.
void write_named_values(const std::filesystem::path& path, const std::vector<std::pair<std::string, double>>& rows);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace kmmc::io
