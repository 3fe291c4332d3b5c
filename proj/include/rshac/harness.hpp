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

// Closed-loop episodes, stabilization detection, performance indices and the
// two benchmark experiments (balancing from an initial tilt, and a step in
// the cart-position reference).

#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rshac/controllers.hpp"
#include "rshac/plant.hpp"

namespace rshac {

/// Cart-position reference: `initial` until `step_time`, then `step_value`.
struct Reference {
  double initial = 0.0;
  std::optional<double> step_time;
  double step_value = 0.0;

  static Reference constant(double x_ref) { return {x_ref, std::nullopt, 0.0}; }
  static Reference step(double from, double at, double to) { return {from, at, to}; }
};

struct EpisodeSpec {
  ControllerKind controller = ControllerKind::kRsHac;
  PlantState x0 = PlantState::Zero();
  Reference reference;
  double duration = 10.0;
  double ts = 0.001;
  Integrator integrator = Integrator::kRk4;

  void validate() const;
  std::size_t sample_count() const;
  /// Sample index at which the reference activates (0 without a step).
  std::size_t activation_index() const;
};

/// Samples k = 0..N at t_k = k ts. u_k is the input held over [t_k, t_k+1).
struct Trajectory {
  double ts = 0.0;
  std::vector<double> t;
  std::vector<PlantState> states;
  std::vector<double> u;
  std::vector<double> x_ref;
  std::size_t activation_index = 0;
  /// Set when the plant state stopped being finite; the samples end there.
  bool diverged = false;

  std::size_t size() const { return t.size(); }
};

Trajectory run_episode(const EpisodeSpec& spec, const ControllerSuite& controllers,
                       const Params& plant);

/// Box around the reference inside which the loop counts as settled.
struct StabilityBox {
  double position = 0.02;                     // |x - x_ref| [m]
  double velocity = 0.02;                     // |x_dot| [m/s]
  double angle = 0.5 * std::numbers::pi / 180.0;         // |q| [rad]
  double angular_rate = 0.5 * std::numbers::pi / 180.0;  // |q_dot| [rad/s]
};

bool stability_satisfied(const PlantState& s, double x_ref, const StabilityBox& box = {});

/// First sample index k* >= activation index such that every sample in
/// [t_k*, t_k* + dwell] is inside the stability box. dwell = 0 gives the first
/// entry into the box.
std::optional<std::size_t> capture_index(const Trajectory& traj, double dwell,
                                         const StabilityBox& box = {});

std::optional<double> transient_time(const Trajectory& traj, double dwell,
                                     const StabilityBox& box = {});

double max_position_deviation(const Trajectory& traj);

/// Sum of |u_k| ts for k in [first, last].
double control_effort(const Trajectory& traj, std::size_t first, std::size_t last);

/// Largest excursion past the new reference after a step, as a percentage of
/// the step size.
double overshoot_percent(const Trajectory& traj);

struct Metrics {
  std::optional<double> transient_time;
  double max_position_deviation = 0.0;
  double control_effort = 0.0;
  std::optional<double> overshoot_pct;
  bool stabilized = false;
  /// Control effort covers the whole episode because the loop never settled.
  bool effort_over_full_episode = false;
  /// The state left the box again after the dwell window.
  bool left_box_after_capture = false;
};

Metrics compute_metrics(const Trajectory& traj, double dwell, bool step_experiment,
                        const StabilityBox& box = {});

struct HarnessOptions {
  Integrator integrator = Integrator::kRk4;
  double dwell = 0.5;
  double duration = 10.0;
  std::vector<ControllerKind> controllers{ControllerKind::kRsHac, ControllerKind::kFuzzy,
                                          ControllerKind::kLqr};
  /// Run the episodes of an experiment on separate threads.
  bool parallel = true;
};

struct ExperimentCell {
  ControllerKind controller;
  std::string experiment;  // "exp1", "exp2" or "custom"
  std::string scenario;
  EpisodeSpec spec;
  Trajectory trajectory;
  Metrics metrics;
};

/// Runs a list of episodes (possibly in parallel) and evaluates them.
std::vector<ExperimentCell> run_cells(std::vector<ExperimentCell> cells,
                                      const ControllerSuite& controllers, const Params& plant,
                                      const HarnessOptions& options);

/// Balancing from X0 = [0, 0, q0, 0] with q0 = 10, 20, 30 deg towards zero.
std::vector<ExperimentCell> run_experiment1(const ControllerSuite& controllers,
                                            const Params& plant,
                                            const HarnessOptions& options = {});

/// From rest, the cart reference steps to 0.2 m at t = 1 s.
std::vector<ExperimentCell> run_experiment2(const ControllerSuite& controllers,
                                            const Params& plant,
                                            const HarnessOptions& options = {});

/// One comparison cell: signed percentage by which the other controller is
/// worse (positive, "up") or better (negative, "down") than the reference
/// controller.
struct ComparisonCell {
  std::optional<double> percent;
  bool flagged = false;
};

/// Relative difference (other - reference) / reference * 100; when the
/// reference is 0 the cell is 0 if both are equal and flagged otherwise.
ComparisonCell compare_values(double reference, double other);

/// Overshoot is compared in percentage points.
ComparisonCell compare_overshoot(double reference_pct, double other_pct);

struct ComparisonRow {
  ComparisonCell transient_time;
  ComparisonCell max_position_deviation;
  ComparisonCell control_effort;
  ComparisonCell overshoot;
};

ComparisonRow compare(const Metrics& reference, const Metrics& other);

std::string format_comparison(const ComparisonCell& cell);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_metrics_csv(std::ostream& os, const std::vector<ExperimentCell>& cells);
std::string trajectory_file_name(const ExperimentCell& cell);

/// Table of transient time / deviation (or overshoot) / effort per controller
/// and scenario.
void print_summary(std::ostream& os, const std::vector<ExperimentCell>& cells);
/// Table of RS-HAC against each other controller.
void print_comparison(std::ostream& os, const std::vector<ExperimentCell>& cells);

/// Formats a metric value the way it appears in the CSV ("nan" when absent).
std::string format_metric(std::optional<double> value);

}  // namespace rshac
