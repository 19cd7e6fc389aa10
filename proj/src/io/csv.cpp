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

#include "kmmc/io/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "kmmc/error.hpp"
#include "kmmc/io/config.hpp"

namespace kmmc::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_cell(const std::string& s, double& v) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

}  // namespace

void write_chain_csv(std::ostream& os, const ChainRecord& record, std::span<const Branch> branches) {
  if (!branches.empty() && branches.size() != record.samples.size())
    throw ValidationError("branch log length differs from chain length");
  const std::size_t dim = record.samples.empty() ? 0 : record.samples.front().size();
  os << "iter,accepted";
  for (std::size_t d = 1; d <= dim; ++d) os << ",x_" << d;
  if (!branches.empty()) os << ",branch";
  os << '\n';
  for (std::size_t i = 0; i < record.samples.size(); ++i) {
    os << (i + 1) << ',' << static_cast<int>(record.accepted[i]);
    for (double x : record.samples[i]) os << ',' << format_double(x);
    if (!branches.empty()) os << ',' << (branches[i] == Branch::micro ? "micro" : "macro");
    os << '\n';
  }
}

void write_chain_csv(const std::filesystem::path& path, const ChainRecord& record, std::span<const Branch> branches) {
  auto os = open_out(path);
  write_chain_csv(os, record, branches);
}

std::filesystem::path meta_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p += ".meta";
  return p;
}

void write_observations(const std::filesystem::path& path, const ObservationSet& set) {
  set.validate();
  const std::size_t dim = set.data.empty() ? 3 : set.data.front().z.size();
  {
    auto os = open_out(path);
    os << 't';
    for (std::size_t d = 1; d <= dim; ++d) os << ",z" << d;
    os << '\n';
    for (const auto& o : set.data) {
      os << format_double(o.t);
      for (double z : o.z) os << ',' << format_double(z);
      os << '\n';
    }
  }
  auto meta = open_out(meta_path(path));
  meta << "seed = " << set.seed << '\n';
  meta << "mode = " << to_string(set.mode) << '\n';
  meta << "amplitudes = ";
  for (std::size_t i = 0; i < set.amplitudes.size(); ++i) meta << (i ? "," : "") << format_double(set.amplitudes[i]);
  meta << '\n';
  meta << "count = " << set.size() << '\n';
}

ObservationSet parse_observations(std::istream& in) {
  ObservationSet set;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      const auto head = split(line);
      if (head.size() < 2 || head[0] != "t") throw ValidationError("line 1: expected header t,z1,...");
      for (std::size_t d = 1; d < head.size(); ++d)
        if (head[d] != "z" + std::to_string(d)) throw ValidationError("line 1: expected header t,z1,...");
      columns = head.size();
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != columns)
      throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " columns");
    Observation o;
    if (!parse_cell(cells[0], o.t)) throw ValidationError("line " + std::to_string(line_no) + ": malformed number");
    o.z.resize(columns - 1);
    for (std::size_t d = 1; d < columns; ++d)
      if (!parse_cell(cells[d], o.z[d - 1]))
        throw ValidationError("line " + std::to_string(line_no) + ": malformed number");
    if (!set.data.empty() && o.t < set.data.back().t)
      throw ValidationError("line " + std::to_string(line_no) + ": observation times must be nondecreasing");
    set.data.push_back(std::move(o));
  }
  if (line_no == 0) throw ValidationError("observation file is empty");
  bool same = true;
  for (const auto& o : set.data) same = same && o.t == set.data.front().t;
  set.mode = same ? ObservationMode::fixed_time : ObservationMode::running_time;
  return set;
}

ObservationSet ingest_observations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open observation file " + path.string());
  ObservationSet set = parse_observations(in);
  std::ifstream meta(meta_path(path));
  std::string line;
  while (meta && std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(' ') + 1);
    value.erase(0, value.find_first_not_of(' '));
    if (key == "seed") {
      std::from_chars(value.data(), value.data() + value.size(), set.seed);
    } else if (key == "amplitudes") {
      set.amplitudes.clear();
      for (const auto& cell : split(value)) {
        double v = 0.0;
        if (parse_cell(cell, v)) set.amplitudes.push_back(v);
      }
    }
  }
  return set;
}

void write_zeta_csv(const std::filesystem::path& path, std::span<const ZetaRecord> history) {
  auto os = open_out(path);
  os << "iter,zeta,r\n";
  for (const auto& z : history) os << z.iter << ',' << format_double(z.zeta) << ',' << format_double(z.r) << '\n';
}

void write_histogram_pair(const std::filesystem::path& path, const Histogram& initial, const Histogram& final) {
  if (initial.edges != final.edges) throw ValidationError("histograms must share bin edges");
  const auto p0 = initial.probabilities();
  const auto p1 = final.probabilities();
  auto os = open_out(path);
  os << "bin_lo,bin_hi,initial,final\n";
  for (std::size_t b = 0; b + 1 < initial.edges.size(); ++b)
    os << format_double(initial.edges[b]) << ',' << format_double(initial.edges[b + 1]) << ',' << format_double(p0[b])
       << ',' << format_double(p1[b]) << '\n';
}

void write_named_values(const std::filesystem::path& path, const std::vector<std::pair<std::string, double>>& rows) {
  auto os = open_out(path);
  os << "name,value\n";
  for (const auto& [name, value] : rows) os << name << ',' << format_double(value) << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  auto os = open_out(path);
  os << content;
}

}  // namespace kmmc::io
