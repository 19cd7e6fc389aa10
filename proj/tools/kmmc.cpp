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

// Command-line front end: one subcommand per experiment.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kmmc/error.hpp"
#include "kmmc/io/config.hpp"
#include "kmmc/io/csv.hpp"
#include "kmmc/io/experiment.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "key = value configuration file");
  cmd->add_option("--seed", opts.seed, "overrides the configured seed");
  cmd->add_option("--out", opts.out, "output directory (overrides out_dir)");
}

kmmc::io::RunConfig resolve(const CommonOptions& opts) {
  kmmc::io::RunConfig c = opts.config.empty() ? kmmc::io::RunConfig{} : kmmc::io::load_config(opts.config);
  if (opts.seed) c.seed = *opts.seed;
  if (!opts.out.empty()) c.out_dir = opts.out;
  c.validate();
  return c;
}

bool is_lorenz(kmmc::io::Experiment e) {
  return e == kmmc::io::Experiment::fixed_time || e == kmmc::io::Experiment::running_time;
}

int run(kmmc::io::RunConfig c) {
  const kmmc::io::RunReport rep = kmmc::io::run_experiment(c);
  std::cout << rep.to_text();
  std::cout << "artifacts written to " << c.out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moment-augmented Metropolis Monte Carlo experiments"};
  app.require_subcommand(1);

  CommonOptions gen, mmc, mm, vb, vf, vd, grid;
  std::string plot_dir;
  auto* c_gen = app.add_subcommand("generate-data", "write a synthetic observation set");
  add_common(c_gen, gen);
  auto* c_mmc = app.add_subcommand("run-mmc", "run the Lorenz identification with plain MMC");
  add_common(c_mmc, mmc);
  auto* c_mm = app.add_subcommand("run-micromacro", "run the Lorenz identification with micro-macro splitting");
  add_common(c_mm, mm);
  auto* c_vb = app.add_subcommand("verify-boltzmann", "particle vs grid study in the jump regime");
  add_common(c_vb, vb);
  auto* c_vf = app.add_subcommand("verify-fpe", "particle vs grid study in the diffusive regime");
  add_common(c_vf, vf);
  auto* c_vd = app.add_subcommand("verify-detail-balance", "detail-balance and entropy invariants");
  add_common(c_vd, vd);
  auto* c_grid = app.add_subcommand("micromacro-grid", "grid-level micro-macro splitting consistency");
  add_common(c_grid, grid);
  auto* c_plot = app.add_subcommand("plot", "emit a plotting script for a run directory");
  c_plot->add_option("--out,dir", plot_dir, "run directory holding hist_*.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    using kmmc::io::Experiment;
    if (c_gen->parsed()) {
      const auto c = resolve(gen);
      const auto set = kmmc::io::make_observations(c);
      const auto path = std::filesystem::path(c.out_dir) / "observations.csv";
      kmmc::io::write_observations(path, set);
      std::cout << "wrote " << set.size() << " observations to " << path.string() << '\n';
      return 0;
    }
    if (c_mmc->parsed() || c_mm->parsed()) {
      auto c = resolve(c_mmc->parsed() ? mmc : mm);
      if (!is_lorenz(c.experiment)) throw kmmc::ValidationError("experiment must be fixed_time or running_time");
      c.micromacro = c_mm->parsed();
      return run(c);
    }
    if (c_vb->parsed()) {
      auto c = resolve(vb);
      c.experiment = Experiment::verify_boltzmann;
      return run(c);
    }
    if (c_vf->parsed()) {
      auto c = resolve(vf);
      c.experiment = Experiment::verify_fpe;
      return run(c);
    }
    if (c_vd->parsed()) {
      auto c = resolve(vd);
      c.experiment = Experiment::verify_detail_balance;
      return run(c);
    }
    if (c_grid->parsed()) {
      auto c = resolve(grid);
      c.experiment = Experiment::micromacro_grid;
      return run(c);
    }
    if (c_plot->parsed()) {
      const auto path = kmmc::io::emit_plot_script(plot_dir);
      std::cout << "wrote " << path.string() << '\n';
      return 0;
    }
  } catch (const kmmc::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
