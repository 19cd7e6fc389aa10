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

#include "kmmc/io/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "kmmc/error.hpp"
#include "kmmc/histogram.hpp"
#include "kmmc/io/csv.hpp"
#include "kmmc/kinetic/micromacro_grid.hpp"
#include "kmmc/lorenz.hpp"
#include "kmmc/strategies.hpp"

namespace kmmc::io {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) return kNaN;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

lorenz::LorenzModel make_model(const RunConfig& c) {
  lorenz::Rk23Options opts;
  opts.rel_tol = c.rel_tol;
  opts.abs_tol = c.abs_tol;
  return lorenz::LorenzModel(c.model, opts);
}

lorenz::LorenzParams x_star(const RunConfig& c) { return {c.x_star[0], c.x_star[1], c.x_star[2]}; }

std::vector<double> pushforward(const lorenz::LorenzModel& model, const ParameterPoint& x, double t) {
  try {
    const auto v = model.at(x, t);
    return {v[0], v[1], v[2]};
  } catch (const ModelEvaluationError&) {
    return {kNaN, kNaN, kNaN};
  }
}

ParameterPoint mean_of(std::span<const ParameterPoint> xs) {
  ParameterPoint m(xs.front().size(), 0.0);
  for (const auto& x : xs)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += x[i];
  for (std::size_t i = 0; i < m.size(); ++i) m[i] /= static_cast<double>(xs.size());
  return m;
}

std::vector<double> variance_of(std::span<const ParameterPoint> xs, const ParameterPoint& mean) {
  std::vector<double> v(mean.size(), 0.0);
  for (const auto& x : xs)
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += (x[i] - mean[i]) * (x[i] - mean[i]);
  for (double& e : v) e /= static_cast<double>(xs.size());
  return v;
}

}  // namespace

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << "experiment = " << experiment << '\n';
  os << "status = " << (ok ? "ok" : "error") << '\n';
  if (!ok) os << "error = " << error << '\n';
  if (!posterior_mean.empty()) {
    os << "acceptance_fraction = " << format_double(acceptance_fraction) << '\n';
    os << "macro_fraction = " << format_double(macro_fraction) << '\n';
    os << "posterior_mean = " << join(posterior_mean) << '\n';
    os << "posterior_variance = " << join(posterior_variance) << '\n';
    os << "true_mean = " << join(true_mean) << '\n';
    os << "posterior_pushforward = " << join(posterior_pushforward) << '\n';
    os << "initial_pushforward = " << join(initial_pushforward) << '\n';
    os << "posterior_pushforward_distance = " << format_double(posterior_distance) << '\n';
    os << "initial_pushforward_distance = " << format_double(initial_distance) << '\n';
  }
  for (const auto& c : checks)
    os << "check " << c.name << " value=" << format_double(c.value) << " threshold=" << format_double(c.threshold)
       << " " << (c.pass ? "PASS" : "FAIL") << '\n';
  for (const auto& r : convergence) kinetic::write_text(os, r);
  os << "# config\n" << config_echo;
  return os.str();
}

bool RunReport::all_checks_pass() const {
  bool ok_all = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  for (const auto& r : convergence) ok_all = ok_all && r.pass;
  return ok_all;
}

ObservationSet make_observations(const RunConfig& config) {
  if (!config.data.empty()) {
    ObservationSet set = ingest_observations(config.data);
    set.validate();
    return set;
  }
  const ObservationMode mode =
      config.experiment == Experiment::running_time ? ObservationMode::running_time : ObservationMode::fixed_time;
  return lorenz::generate_observations(make_model(config), x_star(config), config.a_vec,
                                       static_cast<std::size_t>(config.K_max), mode, config.T, config.seed);
}

LorenzRun run_lorenz(const RunConfig& config, const ObservationSet& data) {
  config.validate();
  data.validate();
  if (data.size() == 0) throw ValidationError("observation set is empty");
  if (!data.data.empty() && data.data.front().z.size() != 3) throw ValidationError("observations must be 3-dimensional");

  const lorenz::LorenzModel model = make_model(config);
  const auto shared = std::make_shared<const ObservationSet>(data);
  const ParameterPoint xs = x_star(config).point();
  const ProjectionBox box = ProjectionBox::around(xs, config.box_lo, config.box_hi);

  LorenzRun run;
  run.startup = lorenz::startup_samples(x_star(config), config.a_vec, static_cast<std::size_t>(config.N0), config.seed);
  const Likelihood likelihood(data.mode, model.as_forward_model(), shared);
  const AcceptanceRule acceptance = likelihood_ratio_acceptance(likelihood);

  std::optional<ProposalKernel> proposal;
  if (config.proposal == ProposalChoice::gaussian) {
    proposal.emplace(gaussian_kernel(box, config.proposal_scale));
  } else {
    const auto form = config.jacobian;
    GradientFn grad = [model, shared, likelihood, form](const ParameterPoint& x, std::int64_t step) {
      const std::size_t idx = shared->mode == ObservationMode::fixed_time
                                  ? likelihood.fixed_time_index(step)
                                  : std::min<std::size_t>(static_cast<std::size_t>(std::max<std::int64_t>(step, 1)),
                                                          shared->size()) - 1;
      return lorenz::likelihood_gradient(x, shared->data[idx], model, form);
    };
    proposal.emplace(gradient_kernel(std::move(grad), box));
  }

  const auto startup = run.startup;
  const InitialSampler initial = [startup](Rng& rng) {
    const auto i = std::min(startup.size() - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(startup.size())));
    return startup[i];
  };
  const ChainConfig chain_config{config.N, config.burn_in, config.seed, kDefaultMaxRetries};

  RunReport& rep = run.report;
  if (config.micromacro) {
    MicroMacroConfig mm{chain_config, config.zeta0, std::nullopt, box};
    const std::vector<double> sigma_nu = data.running_max_variance();
    const DataVariance dv = [sigma_nu](std::int64_t step) {
      const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max<std::int64_t>(step, 0)), sigma_nu.size() - 1);
      return sigma_nu[n];
    };
    run.micromacro = run_micromacro_chain(mm, *proposal, acceptance, initial, MacroState::from_samples(run.startup), dv);
    run.chain = run.micromacro->chain;
    rep.macro_fraction = run.micromacro->macro_fraction();
  } else {
    run.chain = run_chain(chain_config, *proposal, acceptance, initial);
  }

  rep.experiment = to_string(config.experiment);
  rep.config_echo = echo(config);
  rep.acceptance_fraction = run.chain.acceptance_fraction();
  const auto kept = run.chain.kept();
  if (kept.empty()) throw ValidationError("no samples left after burn-in");
  const ParameterPoint xbar = mean_of(kept);
  rep.posterior_mean = xbar.coords();
  rep.posterior_variance = variance_of(kept, xbar);
  rep.true_mean = pushforward(model, xs, config.T);
  rep.posterior_pushforward = pushforward(model, xbar, config.T);
  rep.initial_pushforward = pushforward(model, mean_of(run.startup), config.T);
  rep.posterior_distance = distance(rep.posterior_pushforward, rep.true_mean);
  rep.initial_distance = distance(rep.initial_pushforward, rep.true_mean);
  return run;
}

namespace {

std::vector<std::vector<double>> pushforward_samples(const lorenz::LorenzModel& model,
                                                     std::span<const ParameterPoint> xs, double t) {
  std::vector<std::vector<double>> out(3);
  const ParameterPoint* prev = nullptr;
  std::vector<double> v;
  for (const auto& x : xs) {
    if (prev == nullptr || !(*prev == x)) v = pushforward(model, x, t);
    prev = &x;
    if (!std::isfinite(v[0])) continue;
    for (std::size_t d = 0; d < 3; ++d) out[d].push_back(v[d]);
  }
  return out;
}

std::vector<double> shared_edges(const std::vector<double>& a, const std::vector<double>& b, std::size_t bins) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto* v : {&a, &b})
    for (double x : *v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  return uniform_edges(lo, hi, bins);
}

void write_lorenz_artifacts(const RunConfig& config, const ObservationSet& data, const LorenzRun& run,
                            const std::filesystem::path& dir) {
  write_observations(dir / "observations.csv", data);
  if (run.micromacro) {
    write_chain_csv(dir / "chain.csv", run.chain, run.micromacro->branches);
    write_zeta_csv(dir / "zeta.csv", run.micromacro->zeta_history);
  } else {
    write_chain_csv(dir / "chain.csv", run.chain);
  }

  const auto bins = static_cast<std::size_t>(config.bins);
  const auto kept = run.chain.kept();
  for (std::size_t d = 0; d < 3; ++d) {
    const auto a = component(run.startup, d);
    const auto b = component(kept, d);
    const auto edges = shared_edges(a, b, bins);
    write_histogram_pair(dir / ("hist_x" + std::to_string(d + 1) + ".csv"), histogram_1d(a, edges),
                         histogram_1d(b, edges));
  }
  const lorenz::LorenzModel model = make_model(config);
  const auto v0 = pushforward_samples(model, run.startup, config.T);
  const auto v1 = pushforward_samples(model, kept, config.T);
  for (std::size_t d = 0; d < 3; ++d) {
    const auto edges = shared_edges(v0[d], v1[d], bins);
    write_histogram_pair(dir / ("hist_v" + std::to_string(d + 1) + ".csv"), histogram_1d(v0[d], edges),
                         histogram_1d(v1[d], edges));
  }
  const auto& r = run.report;
  write_named_values(dir / "true_values.csv", {{"x1", config.x_star[0]},
                                               {"x2", config.x_star[1]},
                                               {"x3", config.x_star[2]},
                                               {"v1", r.true_mean[0]},
                                               {"v2", r.true_mean[1]},
                                               {"v3", r.true_mean[2]}});
}

void write_convergence(const std::filesystem::path& dir, const kinetic::ConvergenceReport& r) {
  std::ostringstream text;
  kinetic::write_text(text, r);
  write_text_file(dir / ("convergence_" + r.regime + ".txt"), text.str());
  std::ostringstream csv;
  kinetic::write_csv(csv, r);
  write_text_file(dir / ("convergence_" + r.regime + ".csv"), csv.str());
}

void run_verify_boltzmann(const RunConfig& c, RunReport& rep, const std::filesystem::path& dir) {
  kinetic::BoltzmannStudy study;
  study.h_list = c.h_list;
  study.ensemble = static_cast<std::size_t>(c.ensemble);
  study.coarse_bins = static_cast<std::size_t>(c.coarse_bins);
  study.alpha_scale = c.alpha_scale;
  study.seed = c.seed;
  rep.convergence.push_back(kinetic::verify_boltzmann_limit(study));
  write_convergence(dir, rep.convergence.back());
  if (c.alpha_scale > 0.0) {
    const double h = c.h_list.front();
    const double l1 = kinetic::boltzmann_stationary_distance(study, h, 150.0);
    rep.checks.push_back({"stationary_l1_s150", l1, 0.05, l1 < 0.05});
  }
}

void run_verify_fpe(const RunConfig& c, RunReport& rep, const std::filesystem::path& dir) {
  kinetic::BrownianStudy study;
  study.h_list = c.h_list;
  study.ensemble = static_cast<std::size_t>(c.ensemble);
  study.coarse_bins = static_cast<std::size_t>(c.coarse_bins);
  study.coeff.diffusion = c.fpe_diffusion;
  study.seed = c.seed;
  rep.convergence.push_back(kinetic::verify_brownian_limit(study));
  write_convergence(dir, rep.convergence.back());

  const double h = 0.01;
  const std::vector<std::int64_t> steps{50, 100};
  auto moments_for = [&](kinetic::FPECoefficients coeff) {
    kinetic::BrownianStudy s = study;
    s.coeff = std::move(coeff);
    return kinetic::brownian_particle_moments(s, h, 0.0, steps);
  };
  kinetic::FPECoefficients walk;
  const auto m_walk = moments_for(walk);
  const double var_err = std::abs(m_walk.back().variance - m_walk.back().s) / m_walk.back().s;
  rep.checks.push_back({"particle_variance_equals_s", var_err, 0.03, var_err <= 0.03});

  kinetic::FPECoefficients drift;
  drift.drift = [](double) { return 1.0; };
  drift.sigma = [](double) { return 0.1; };
  const auto m_drift = moments_for(drift);
  const double velocity = m_drift.back().mean / m_drift.back().s;
  rep.checks.push_back({"particle_mean_velocity", velocity, 1.0, std::abs(velocity - 1.0) <= 0.05});

  kinetic::FPECoefficients rejecting;
  rejecting.beta = [](double) { return 1.0; };
  const auto m_rej = moments_for(rejecting);
  const double rate = (m_rej[1].variance - m_rej[0].variance) / (m_rej[1].s - m_rej[0].s);
  rep.checks.push_back({"particle_variance_rate_beta1", rate, 2.0, std::abs(rate - 2.0) <= 0.1});

  rejecting.diffusion = c.fpe_diffusion;
  const double solver_rate = kinetic::fokker_planck_variance_rate(kinetic::Grid(-5.0, 5.0, 200), rejecting, 0.5, 100);
  rep.checks.push_back({"solver_variance_rate_beta1", solver_rate, 2.0, std::abs(solver_rate - 2.0) <= 0.04});

  const double classical = kinetic::fokker_planck_variance_rate(kinetic::Grid(-5.0, 5.0, 200), walk, 0.5, 100);
  rep.checks.push_back({"solver_variance_rate_beta0", classical, 1.0, std::abs(classical - 1.0) <= 0.02});
}

void run_micromacro_grid(const RunConfig& c, RunReport& rep, const std::filesystem::path& dir) {
  kinetic::BoltzmannStudy study;
  study.alpha_scale = 1.0;
  const kinetic::KernelGrid q = study.kernel();
  const kinetic::Grid& grid = q.grid();
  const kinetic::GridDensity micro0 = kinetic::GridDensity::uniform_on(grid, -2.0, -1.0);
  const kinetic::GridDensity macro0 = kinetic::GridDensity::from_function(grid, [](double x) {
    const double u = (x - 0.5) / 0.5;
    return std::exp(-0.5 * u * u);
  });
  const auto steps = static_cast<std::size_t>(std::llround(c.horizon / c.grid_ds));
  const kinetic::ZetaPath path = kinetic::ZetaPath::linear(c.zeta_start, c.zeta_slope);

  std::vector<std::pair<std::string, kinetic::GammaChoice>> gammas;
  if (c.gamma != GammaSelection::zeta) gammas.emplace_back("1", kinetic::GammaChoice::constant(1.0));
  if (c.gamma != GammaSelection::one) gammas.emplace_back("zeta", kinetic::GammaChoice::zeta());

  std::ostringstream csv;
  csv << "gamma,s,l1\n";
  for (const auto& [name, gamma] : gammas) {
    const auto split = kinetic::solve_micromacro_grid(q, gamma, path, micro0, macro0, c.grid_ds, steps);
    const auto direct = kinetic::boltzmann_evolve(split.combined.front(), q, c.grid_ds, steps);
    for (std::size_t k = 0; k <= steps; ++k)
      csv << name << ',' << format_double(split.times[k]) << ','
          << format_double(kinetic::l1_distance(split.combined[k], direct[k])) << '\n';
    const double err = kinetic::l1_distance(split.combined.back(), direct.back());
    rep.checks.push_back({"reconstruction_gamma_" + name, err, 5.0 * c.grid_ds, err <= 5.0 * c.grid_ds});
  }
  write_text_file(dir / "micromacro_grid.csv", csv.str());
}

}  // namespace

RunReport run_experiment(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::filesystem::path dir = config.out_dir;
  RunReport rep;
  rep.experiment = to_string(config.experiment);
  rep.config_echo = echo(config);
  auto finish = [&] {
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text_file(dir / "report.txt", rep.to_text());
    write_text_file(dir / "timing.txt", "wall_seconds = " + format_double(rep.wall_seconds) + "\n");
  };
  try {
    config.validate();
    std::filesystem::create_directories(dir);
    switch (config.experiment) {
      case Experiment::fixed_time:
      case Experiment::running_time: {
        const ObservationSet data = make_observations(config);
        LorenzRun run = run_lorenz(config, data);
        write_lorenz_artifacts(config, data, run, dir);
        rep = std::move(run.report);
        break;
      }
      case Experiment::verify_boltzmann:
        run_verify_boltzmann(config, rep, dir);
        break;
      case Experiment::verify_fpe:
        run_verify_fpe(config, rep, dir);
        break;
      case Experiment::verify_detail_balance:
        rep.checks = kinetic::detail_balance_suite(config.seed);
        break;
      case Experiment::micromacro_grid:
        run_micromacro_grid(config, rep, dir);
        break;
    }
  } catch (const std::exception& e) {
    rep.ok = false;
    rep.error = e.what();
    try {
      finish();
    } catch (const std::exception&) {
      // The original error is the one worth reporting.
    }
    throw;
  }
  finish();
  return rep;
}

std::filesystem::path emit_plot_script(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ValidationError("not a directory: " + dir.string());
  std::vector<std::string> panels;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("hist_") && name.ends_with(".csv")) panels.push_back(name);
  }
  if (panels.empty()) throw ValidationError("missing inputs in " + dir.string() + ": hist_*.csv");
  std::sort(panels.begin(), panels.end());

  std::ostringstream py;
  py << "#!/usr/bin/env python3\n"
        "\"\"\"Initial vs final histograms, one panel per hist_*.csv file.\"\"\"\n"
        "import csv\n"
        "import os\n"
        "\n"
        "import matplotlib\n"
        "matplotlib.use(\"Agg\")\n"
        "import matplotlib.pyplot as plt\n"
        "\n"
        "HERE = os.path.dirname(os.path.abspath(__file__))\n"
        "PANELS = [\n";
  for (const auto& p : panels) py << "    \"" << p << "\",\n";
  py << "]\n"
        "\n"
        "\n"
        "def read_rows(name):\n"
        "    with open(os.path.join(HERE, name), newline=\"\") as fh:\n"
        "        return list(csv.DictReader(fh))\n"
        "\n"
        "\n"
        "def true_values():\n"
        "    path = os.path.join(HERE, \"true_values.csv\")\n"
        "    if not os.path.exists(path):\n"
        "        return {}\n"
        "    return {row[\"name\"]: float(row[\"value\"]) for row in read_rows(\"true_values.csv\")}\n"
        "\n"
        "\n"
        "def main():\n"
        "    truth = true_values()\n"
        "    fig, axes = plt.subplots(len(PANELS), 1, figsize=(6, 2.6 * len(PANELS)), squeeze=False)\n"
        "    for ax, name in zip(axes[:, 0], PANELS):\n"
        "        rows = read_rows(name)\n"
        "        lo = [float(r[\"bin_lo\"]) for r in rows]\n"
        "        width = [float(r[\"bin_hi\"]) - float(r[\"bin_lo\"]) for r in rows]\n"
        "        ax.bar(lo, [float(r[\"initial\"]) for r in rows], width=width, align=\"edge\", alpha=0.5,\n"
        "               label=\"initial\")\n"
        "        ax.bar(lo, [float(r[\"final\"]) for r in rows], width=width, align=\"edge\", alpha=0.5,\n"
        "               label=\"final\")\n"
        "        key = name[len(\"hist_\"):-len(\".csv\")]\n"
        "        if key in truth:\n"
        "            ax.axvline(truth[key], color=\"k\", linestyle=\"--\", label=\"true\")\n"
        "        ax.set_title(key)\n"
        "        ax.legend(fontsize=\"small\")\n"
        "    fig.tight_layout()\n"
        "    fig.savefig(os.path.join(HERE, \"histograms.png\"), dpi=120)\n"
        "    print(f\"rendered {len(fig.axes)} panels to histograms.png\")\n"
        "\n"
        "\n"
        "if __name__ == \"__main__\":\n"
        "    main()\n";
  const auto path = dir / "plot.py";
  write_text_file(path, py.str());
  return path;
}

}  // namespace kmmc::io
