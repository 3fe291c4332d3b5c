// Copyright 2026 The rshac Authors
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

// Command-line front end: run the experiments, self-check the library, and
// inspect the LQR gain.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rshac/config.hpp"
#include "rshac/controllers.hpp"
#include "rshac/harness.hpp"
#include "rshac/self_check.hpp"

namespace {

using namespace rshac;

struct RunFlags {
  std::optional<std::string> experiment;
  std::optional<std::string> controllers;
  std::optional<std::string> out;
  std::optional<std::string> integrator;
  std::optional<double> dwell;
};

std::vector<ExperimentCell> run_custom(const RunConfig& cfg, const ControllerSuite& suite) {
  std::vector<ExperimentCell> cells;
  const HarnessOptions options = cfg.harness_options();
  for (ControllerKind kind : options.controllers) {
    ExperimentCell cell{kind, "custom", "custom", {}, {}, {}};
    cell.spec.controller = kind;
    cell.spec.x0 = cfg.custom.x0;
    cell.spec.reference = cfg.custom.step_time
                              ? Reference::step(cfg.custom.x_ref, *cfg.custom.step_time,
                                                cfg.custom.step_ref)
                              : Reference::constant(cfg.custom.x_ref);
    cell.spec.duration = options.duration;
    cell.spec.ts = cfg.plant.ts;
    cell.spec.integrator = options.integrator;
    cells.push_back(std::move(cell));
  }
  return run_cells(std::move(cells), suite, cfg.plant, options);
}

int cmd_run(RunConfig cfg, const RunFlags& flags) {
  if (flags.experiment) cfg.experiment = parse_experiment(*flags.experiment);
  if (flags.controllers) cfg.controllers = parse_controller_list(*flags.controllers);
  if (flags.out) cfg.out_dir = *flags.out;
  if (flags.integrator) cfg.integrator = parse_integrator(*flags.integrator);
  if (flags.dwell) {
    if (!(*flags.dwell >= 0.0)) throw std::invalid_argument("--dwell must be >= 0");
    cfg.dwell = *flags.dwell;
  }

  const ControllerSuite suite(cfg.rshac, cfg.fuzzy, cfg.lqr, cfg.plant);
  const HarnessOptions options = cfg.harness_options();
  std::vector<ExperimentCell> cells;
  const auto append = [&cells](std::vector<ExperimentCell> more) {
    for (ExperimentCell& c : more) cells.push_back(std::move(c));
  };
  if (cfg.experiment == ExperimentSelector::kExp1 || cfg.experiment == ExperimentSelector::kAll) {
    append(run_experiment1(suite, cfg.plant, options));
  }
  if (cfg.experiment == ExperimentSelector::kExp2 || cfg.experiment == ExperimentSelector::kAll) {
    append(run_experiment2(suite, cfg.plant, options));
  }
  if (cfg.experiment == ExperimentSelector::kCustom) append(run_custom(cfg, suite));

  std::filesystem::create_directories(cfg.out_dir);
  for (const ExperimentCell& cell : cells) {
    std::ofstream os(cfg.out_dir / trajectory_file_name(cell));
    if (!os) throw std::runtime_error("cannot write " + trajectory_file_name(cell));
    write_trajectory_csv(os, cell.trajectory);
  }
  {
    std::ofstream os(cfg.out_dir / "metrics.csv");
    if (!os) throw std::runtime_error("cannot write metrics.csv");
    write_metrics_csv(os, cells);
  }

  print_summary(std::cout, cells);
  std::cout << '\n';
  print_comparison(std::cout, cells);

  int status = 0;
  for (const ExperimentCell& cell : cells) {
    if (!cell.metrics.stabilized) {
      std::cerr << "warning: " << controller_name(cell.controller) << ' ' << cell.experiment
                << ' ' << cell.scenario << " did not stabilize\n";
      status = 1;
    }
  }
  std::cout << "\nwrote " << cells.size() << " trajectories and metrics.csv to "
            << cfg.out_dir.string() << '\n';
  return status;
}

int cmd_validate(const RunConfig& cfg) {
  int failed = 0;
  for (const CheckResult& r : run_self_checks(cfg)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ')';
    std::cout << '\n';
    if (!r.passed) ++failed;
  }
  std::cout << (failed == 0 ? "all checks passed\n" : std::to_string(failed) + " check(s) failed\n");
  return failed == 0 ? 0 : 1;
}

void print_gain(const char* label, const Eigen::RowVector4d& K) {
  std::printf("%-10s [% .6f, % .6f, % .6f, % .6f]\n", label, K(0), K(1), K(2), K(3));
}

void print_poles(const char* label, const Eigen::Vector4d& mags) {
  std::printf("%-10s |z| = %.8f %.8f %.8f %.8f\n", label, mags(0), mags(1), mags(2), mags(3));
}

int cmd_gain(const RunConfig& cfg) {
  const Model d = discretize(linearize(cfg.plant), cfg.plant.ts);
  LqrConfig dare_cfg = cfg.lqr;
  dare_cfg.source = GainSource::kDare;
  const LqrDesign dare = lqr_gain(dare_cfg, d);
  const Eigen::RowVector4d& published = cfg.lqr.published_gain;

  print_gain("dare", dare.K);
  print_gain("published", published);
  std::printf("relative deviation of the published gain from the riccati gain:\n");
  const char* names[4] = {"x", "x_dot", "q", "q_dot"};
  for (int i = 0; i < 4; ++i) {
    std::printf("  %-6s %+.2f%%\n", names[i], (published(i) - dare.K(i)) / dare.K(i) * 100.0);
  }
  print_poles("dare", closed_loop_pole_magnitudes(d, dare.K));
  print_poles("published", closed_loop_pole_magnitudes(d, published));
  std::printf("riccati residual %.3e after %lld iterations\n", dare.residual,
              static_cast<long long>(dare.iterations));
  std::printf("controller uses the %s gain\n",
              cfg.lqr.source == GainSource::kDare ? "riccati" : "published");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hedge-algebra controller benchmark for a cart-pole"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);

  RunFlags flags;
  CLI::App* run = app.add_subcommand("run", "Run the experiments and write CSV results");
  run->add_option("--experiment", flags.experiment, "exp1, exp2, all or custom");
  run->add_option("--controller", flags.controllers, "rshac, fc, lqr, a comma list or all");
  run->add_option("--out", flags.out, "Output directory");
  run->add_option("--integrator", flags.integrator, "rk4 or euler");
  run->add_option("--dwell", flags.dwell, "Dwell window for the transient time [s]");
  CLI::App* validate = app.add_subcommand("validate", "Run the built-in self checks");
  CLI::App* gain = app.add_subcommand("gain", "Compare the riccati and published LQR gains");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (run->parsed()) return cmd_run(cfg, flags);
    if (validate->parsed()) return cmd_validate(cfg);
    if (gain->parsed()) return cmd_gain(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
