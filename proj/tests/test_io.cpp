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

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kmmc/error.hpp"
#include "kmmc/io/config.hpp"
#include "kmmc/io/csv.hpp"
#include "kmmc/io/experiment.hpp"
#include "kmmc/lorenz.hpp"

using namespace kmmc;
using namespace kmmc::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kmmc_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string expect_validation_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no error for: " << text;
  return {};
}

int run_cli(const std::string& args) {
  const char* cli = std::getenv("KMMC_CLI");
  if (cli == nullptr) return -1;
  const int status = std::system((std::string(cli) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig small_lorenz(const fs::path& out) {
  RunConfig c;
  c.N = 150;
  c.burn_in = 50;
  c.K_max = 20;
  c.T = 2.0;
  c.seed = 5;
  c.out_dir = out.string();
  return c;
}

}  // namespace

TEST(Config, EmptyGivesDefaults) {
  const auto c = parse_config("");
  EXPECT_EQ(c, RunConfig{});
  EXPECT_EQ(c.N, 10'000);
  EXPECT_EQ(c.burn_in, 1000);
  EXPECT_EQ(c.T, 25.0);
  EXPECT_EQ(c.K_max, 10'000);
  EXPECT_EQ(c.N0, 100);
  EXPECT_EQ(c.a_vec, (std::array<double, 3>{10, 1, 10}));
  EXPECT_EQ(c.x_star, (std::array<double, 3>{10, 8.0 / 3.0, 28}));
  EXPECT_EQ(c.seed, 0u);
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_EQ(expect_validation_error("N = -1"), "N must be positive");
  EXPECT_NE(expect_validation_error("bogus = 3").find("'bogus'"), std::string::npos);
  EXPECT_NE(expect_validation_error("T = abc").find("'T'"), std::string::npos);
  EXPECT_NE(expect_validation_error("a_vec = 1,2").find("'a_vec'"), std::string::npos);
  EXPECT_NE(expect_validation_error("just text").find("line 1"), std::string::npos);
}

TEST(Config, CommentsAndBlankLines) {
  const auto c = parse_config("# a comment\n\nseed = 12\n  N = 300  \nburn_in=20\nexperiment = running_time\n");
  EXPECT_EQ(c.seed, 12u);
  EXPECT_EQ(c.N, 300);
  EXPECT_EQ(c.experiment, Experiment::running_time);
}

TEST(Config, EchoRoundTrip) {
  auto c = parse_config("a_vec = 0,0,0\nproposal = gradient\nT = 0.1\nh_list = 0.3,0.1\n");
  EXPECT_EQ(c.a_vec, (std::array<double, 3>{0, 0, 0}));
  const auto again = parse_config(echo(c));
  EXPECT_EQ(again, c);
  EXPECT_EQ(echo(again), echo(c));
  // Every key appears exactly once.
  const auto text = echo(c);
  for (const auto& key : config_keys()) EXPECT_NE(text.find(key + " = "), std::string::npos) << key;
}

TEST(Config, LoadFromFile) {
  const auto dir = scratch("config");
  std::ofstream(dir / "run.cfg") << "N = 77\nburn_in = 7\n";
  EXPECT_EQ(load_config(dir / "run.cfg").N, 77);
  EXPECT_THROW((void)load_config(dir / "missing.cfg"), ValidationError);
}

TEST(Observations, FixedModeInferred) {
  std::istringstream in("t,z1,z2,z3\n2,1,2,3\n2,4,5,6\n2,7,8,9\n");
  const auto set = parse_observations(in);
  EXPECT_EQ(set.mode, ObservationMode::fixed_time);
  EXPECT_EQ(set.size(), 3u);
}

TEST(Observations, MalformedRowsReportLine) {
  std::istringstream bad("t,z1,z2,z3\n1,1,2,3\n1,x,2,3\n");
  try {
    (void)parse_observations(bad);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream short_row("t,z1,z2,z3\n1,1,2\n");
  EXPECT_THROW((void)parse_observations(short_row), ValidationError);
  std::istringstream decreasing("t,z1,z2,z3\n2,1,2,3\n1,1,2,3\n");
  EXPECT_THROW((void)parse_observations(decreasing), ValidationError);
}

TEST(Observations, RoundTripIsLossless) {
  const auto dir = scratch("obs");
  const lorenz::LorenzModel model;
  for (auto mode : {ObservationMode::fixed_time, ObservationMode::running_time}) {
    const auto set = lorenz::generate_observations(model, lorenz::kReferenceParams, {10, 1, 10}, 12, mode, 3.0, 17);
    write_observations(dir / "obs.csv", set);
    const auto back = ingest_observations(dir / "obs.csv");
    EXPECT_EQ(back.data, set.data);
    EXPECT_EQ(back.mode, set.mode);
    EXPECT_EQ(back.seed, 17u);
    EXPECT_EQ(back.amplitudes, set.amplitudes);
  }
  EXPECT_TRUE(fs::exists(meta_path(dir / "obs.csv")));
}

TEST(ChainCsv, HeaderAndRows) {
  ChainRecord r;
  r.samples = {ParameterPoint{1.5, 2.0}, ParameterPoint{0.1, -3.0}};
  r.accepted = {1, 0};
  std::ostringstream os;
  const std::vector<Branch> branches{Branch::micro, Branch::macro};
  write_chain_csv(os, r, branches);
  EXPECT_EQ(os.str(), "iter,accepted,x_1,x_2,branch\n1,1,1.5,2,micro\n2,0,0.10000000000000001,-3,macro\n");
}

TEST(RunExperiment, LorenzArtifactsAreDeterministic) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const auto ra = run_experiment(small_lorenz(a));
  const auto rb = run_experiment(small_lorenz(b));
  EXPECT_TRUE(ra.ok);
  for (const char* f : {"chain.csv", "observations.csv", "hist_x1.csv", "hist_v3.csv", "true_values.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  // The echoed out_dir differs; everything else in the report matches.
  auto strip = [](std::string s) {
    const auto p = s.find("out_dir = ");
    return s.erase(p, s.find('\n', p) - p);
  };
  EXPECT_EQ(strip(slurp(a / "report.txt")), strip(slurp(b / "report.txt")));
  EXPECT_GE(ra.acceptance_fraction, 0.0);
  EXPECT_LE(ra.acceptance_fraction, 1.0);
  EXPECT_EQ(ra.true_mean.size(), 3u);
  EXPECT_GE(ra.posterior_distance, 0.0);
}

TEST(RunExperiment, MicroMacroWritesBranchesAndZeta) {
  const auto dir = scratch("mm");
  auto c = small_lorenz(dir);
  c.experiment = Experiment::running_time;
  c.micromacro = true;
  const auto r = run_experiment(c);
  EXPECT_GE(r.macro_fraction, 0.0);
  EXPECT_LE(r.macro_fraction, 1.0);
  EXPECT_NE(slurp(dir / "chain.csv").find(",branch\n"), std::string::npos);
  EXPECT_EQ(slurp(dir / "zeta.csv").substr(0, 13), "iter,zeta,r\n1");
}

TEST(RunExperiment, IngestsRecordedData) {
  const auto dir = scratch("ingest");
  auto c = small_lorenz(dir / "gen");
  const auto set = make_observations(c);
  write_observations(dir / "data.csv", set);
  c.data = (dir / "data.csv").string();
  EXPECT_EQ(make_observations(c).data, set.data);
}

TEST(RunExperiment, ReportWrittenOnFailure) {
  const auto dir = scratch("fail");
  auto c = small_lorenz(dir);
  c.data = (dir / "does_not_exist.csv").string();
  EXPECT_THROW((void)run_experiment(c), ValidationError);
  const auto report = slurp(dir / "report.txt");
  EXPECT_NE(report.find("status = error"), std::string::npos);
  EXPECT_NE(report.find("does_not_exist.csv"), std::string::npos);
}

TEST(RunExperiment, DetailBalanceChecks) {
  const auto dir = scratch("db");
  RunConfig c;
  c.experiment = Experiment::verify_detail_balance;
  c.out_dir = dir.string();
  const auto r = run_experiment(c);
  EXPECT_FALSE(r.checks.empty());
  EXPECT_TRUE(r.all_checks_pass());
  const auto text = slurp(dir / "report.txt");
  EXPECT_NE(text.find("PASS"), std::string::npos);
}

TEST(PlotScript, ReferencesHistogramFiles) {
  const auto dir = scratch("plot");
  std::ofstream(dir / "hist_x1.csv") << "bin_lo,bin_hi,initial,final\n0,1,0.5,0.5\n";
  std::ofstream(dir / "hist_v1.csv") << "bin_lo,bin_hi,initial,final\n0,1,0.5,0.5\n";
  const auto script = slurp(emit_plot_script(dir));
  EXPECT_NE(script.find("\"hist_x1.csv\""), std::string::npos);
  EXPECT_NE(script.find("\"hist_v1.csv\""), std::string::npos);
}

TEST(PlotScript, EmptyDirectoryRejected) {
  const auto dir = scratch("plot_empty");
  try {
    (void)emit_plot_script(dir);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("hist_"), std::string::npos);
  }
}

TEST(PlotScript, OnePanelPerHistogram) {
  if (std::system("python3 -c 'import matplotlib' >/dev/null 2>&1") != 0) GTEST_SKIP() << "matplotlib unavailable";
  const auto dir = scratch("plot_render");
  const auto r = run_experiment(small_lorenz(dir));
  ASSERT_TRUE(r.ok);
  const auto script = emit_plot_script(dir);
  FILE* pipe = popen(("python3 " + script.string() + " 2>/dev/null").c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) out += buf;
  ASSERT_EQ(pclose(pipe), 0);
  EXPECT_EQ(out, "rendered 6 panels to histograms.png\n");
  EXPECT_TRUE(fs::exists(dir / "histograms.png"));
}

TEST(Cli, ExitCodes) {
  if (std::getenv("KMMC_CLI") == nullptr) GTEST_SKIP() << "KMMC_CLI not set";
  const auto dir = scratch("cli");
  std::ofstream(dir / "bad.cfg") << "N = -1\n";
  std::ofstream(dir / "ok.cfg") << "N = 60\nburn_in = 10\nK_max = 5\nT = 1\n";
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("no-such-command"), 1);
  EXPECT_EQ(run_cli("run-mmc --config " + (dir / "bad.cfg").string()), 1);
  EXPECT_EQ(run_cli("run-mmc --config " + (dir / "ok.cfg").string() + " --seed 3 --out " + (dir / "run").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "run" / "chain.csv"));
  EXPECT_EQ(run_cli("generate-data --config " + (dir / "ok.cfg").string() + " --out " + (dir / "gen").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "gen" / "observations.csv"));
  EXPECT_EQ(run_cli("plot " + (dir / "run").string()), 0);
  EXPECT_EQ(run_cli("plot " + (dir / "gen").string()), 1);
  // Output directory cannot be created under a regular file: runtime failure.
  EXPECT_EQ(run_cli("generate-data --config " + (dir / "ok.cfg").string() + " --out " + (dir / "ok.cfg" / "x").string()), 2);
}
