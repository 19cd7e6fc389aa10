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

#include "kmmc/io/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "kmmc/error.hpp"

namespace kmmc::io {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

template <typename E>
struct EnumNames {
  std::vector<std::pair<E, std::string>> names;

  [[nodiscard]] std::string get(E e) const {
    for (const auto& [v, n] : names)
      if (v == e) return n;
    return "?";
  }
  [[nodiscard]] bool parse(const std::string& s, E& out) const {
    for (const auto& [v, n] : names)
      if (n == s) {
        out = v;
        return true;
      }
    return false;
  }
  [[nodiscard]] std::string choices() const {
    std::string c;
    for (const auto& [v, n] : names) c += (c.empty() ? "" : "|") + n;
    return c;
  }
};

const EnumNames<Experiment> kExperiments{{{Experiment::fixed_time, "fixed_time"},
                                          {Experiment::running_time, "running_time"},
                                          {Experiment::verify_boltzmann, "verify_boltzmann"},
                                          {Experiment::verify_fpe, "verify_fpe"},
                                          {Experiment::verify_detail_balance, "verify_detail_balance"},
                                          {Experiment::micromacro_grid, "micromacro_grid"}}};
const EnumNames<ProposalChoice> kProposals{{{ProposalChoice::gaussian, "gaussian"}, {ProposalChoice::gradient, "gradient"}}};
const EnumNames<lorenz::Variant> kVariants{{{lorenz::Variant::shifted, "shifted"},
                                            {lorenz::Variant::classical, "classical"}}};
const EnumNames<lorenz::JacobianForm> kJacobians{{{lorenz::JacobianForm::variational, "variational"},
                                                  {lorenz::JacobianForm::reduced, "reduced"}}};
const EnumNames<kinetic::RejectionDiffusion> kDiffusion{
    {{kinetic::RejectionDiffusion::one_plus_beta, "one_plus_beta"},
     {kinetic::RejectionDiffusion::particle_consistent, "particle_consistent"}}};
const EnumNames<GammaSelection> kGamma{{{GammaSelection::one, "1"}, {GammaSelection::zeta, "zeta"}, {GammaSelection::both, "both"}}};

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
  throw ValidationError("invalid value for key '" + key + "': '" + value + "' (expected " + expected + ")");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) bad_value(key, s, "a number");
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& s) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) bad_value(key, s, "an integer");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) bad_value(key, s, "a comma-separated list of numbers");
  return out;
}

std::array<double, 3> parse_triple(const std::string& key, const std::string& s) {
  const auto v = parse_list(key, s);
  if (v.size() != 3) bad_value(key, s, "three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

Field real(std::string key, double RunConfig::*m) {
  return {key, [m, key](RunConfig& c, const std::string& v) { c.*m = parse_double(key, v); },
          [m](const RunConfig& c) { return format_double(c.*m); }};
}

Field integer(std::string key, std::int64_t RunConfig::*m) {
  return {key, [m, key](RunConfig& c, const std::string& v) { c.*m = parse_int(key, v); },
          [m](const RunConfig& c) { return std::to_string(c.*m); }};
}

Field triple(std::string key, std::array<double, 3> RunConfig::*m) {
  return {key, [m, key](RunConfig& c, const std::string& v) { c.*m = parse_triple(key, v); },
          [m](const RunConfig& c) { return join({(c.*m)[0], (c.*m)[1], (c.*m)[2]}); }};
}

Field text(std::string key, std::string RunConfig::*m) {
  return {key, [m](RunConfig& c, const std::string& v) { c.*m = v; }, [m](const RunConfig& c) { return c.*m; }};
}

template <typename E>
Field choice(std::string key, E RunConfig::*m, const EnumNames<E>& names) {
  return {key,
          [m, key, &names](RunConfig& c, const std::string& v) {
            if (!names.parse(v, c.*m)) bad_value(key, v, names.choices());
          },
          [m, &names](const RunConfig& c) { return names.get(c.*m); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      choice("experiment", &RunConfig::experiment, kExperiments),
      integer("N", &RunConfig::N),
      integer("burn_in", &RunConfig::burn_in),
      real("T", &RunConfig::T),
      integer("K_max", &RunConfig::K_max),
      integer("N0", &RunConfig::N0),
      triple("a_vec", &RunConfig::a_vec),
      triple("x_star", &RunConfig::x_star),
      {"seed",
       [](RunConfig& c, const std::string& v) {
         std::uint64_t s = 0;
         const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
         if (ec != std::errc() || p != v.data() + v.size() || v.empty()) bad_value("seed", v, "a nonnegative integer");
         c.seed = s;
       },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      text("out_dir", &RunConfig::out_dir),
      text("data", &RunConfig::data),
      choice("proposal", &RunConfig::proposal, kProposals),
      real("proposal_scale", &RunConfig::proposal_scale),
      real("box_lo", &RunConfig::box_lo),
      real("box_hi", &RunConfig::box_hi),
      {"micromacro",
       [](RunConfig& c, const std::string& v) {
         if (v == "true" || v == "1")
           c.micromacro = true;
         else if (v == "false" || v == "0")
           c.micromacro = false;
         else
           bad_value("micromacro", v, "true|false");
       },
       [](const RunConfig& c) { return std::string(c.micromacro ? "true" : "false"); }},
      real("zeta0", &RunConfig::zeta0),
      choice("model", &RunConfig::model, kVariants),
      choice("jacobian", &RunConfig::jacobian, kJacobians),
      real("rel_tol", &RunConfig::rel_tol),
      real("abs_tol", &RunConfig::abs_tol),
      integer("bins", &RunConfig::bins),
      {"h_list", [](RunConfig& c, const std::string& v) { c.h_list = parse_list("h_list", v); },
       [](const RunConfig& c) { return join(c.h_list); }},
      integer("ensemble", &RunConfig::ensemble),
      integer("coarse_bins", &RunConfig::coarse_bins),
      real("alpha_scale", &RunConfig::alpha_scale),
      choice("fpe_diffusion", &RunConfig::fpe_diffusion, kDiffusion),
      choice("gamma", &RunConfig::gamma, kGamma),
      real("zeta_start", &RunConfig::zeta_start),
      real("zeta_slope", &RunConfig::zeta_slope),
      real("grid_ds", &RunConfig::grid_ds),
      real("horizon", &RunConfig::horizon),
  };
  return f;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

std::string to_string(Experiment e) { return kExperiments.get(e); }

void RunConfig::validate() const {
  require(N > 0, "N must be positive");
  require(burn_in >= 0, "burn_in must be nonnegative");
  require(burn_in <= N, "burn_in must not exceed N");
  require(T > 0.0, "T must be positive");
  require(K_max > 0, "K_max must be positive");
  require(N0 > 0, "N0 must be positive");
  for (double a : a_vec) require(a >= 0.0 && std::isfinite(a), "a_vec must be finite and nonnegative");
  for (double x : x_star) require(std::isfinite(x), "x_star must be finite");
  require(!out_dir.empty(), "out_dir must not be empty");
  require(proposal_scale > 0.0, "proposal_scale must be positive");
  require(box_lo > 0.0 && box_lo <= box_hi, "box_lo must be positive and not exceed box_hi");
  require(zeta0 >= 0.0 && zeta0 <= 1.0, "zeta0 must lie in [0, 1]");
  require(rel_tol > 0.0, "rel_tol must be positive");
  require(abs_tol > 0.0, "abs_tol must be positive");
  require(bins > 0, "bins must be positive");
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    require(h_list[k] > 0.0, "h_list must be positive");
    require(k == 0 || h_list[k] < h_list[k - 1], "h_list must be decreasing");
  }
  require(ensemble > 0, "ensemble must be positive");
  require(coarse_bins > 0, "coarse_bins must be positive");
  require(alpha_scale >= 0.0, "alpha_scale must be nonnegative");
  require(zeta_start > 0.0 && zeta_start < 1.0, "zeta_start must lie in (0, 1)");
  require(grid_ds > 0.0, "grid_ds must be positive");
  require(horizon > 0.0, "horizon must be positive");
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::map<std::string, const Field*> index;
  for (const auto& f : fields()) index[f.key] = &f;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw ValidationError("unknown key '" + key + "'");
    it->second->set(c, value);
  }
  c.validate();
  return c;
}

RunConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  return parse_config(in);
}

std::string echo(const RunConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(config) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

}  // namespace kmmc::io
