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

#include "rshac/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <iomanip>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rshac {
namespace {

std::size_t to_samples(double seconds, double ts) {
  return static_cast<std::size_t>(std::llround(seconds / ts));
}

std::string format_number(double v, int significant) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

double x_ref_at(const Reference& ref, std::size_t k, std::size_t activation) {
  if (ref.step_time && k >= activation) return ref.step_value;
  return ref.initial;
}

}  // namespace

void EpisodeSpec::validate() const {
  if (!(duration > 0.0)) throw std::invalid_argument("episode: duration must be > 0");
  if (!(ts > 0.0)) throw std::invalid_argument("episode: ts must be > 0");
  if (!x0.allFinite()) throw std::invalid_argument("episode: initial state must be finite");
  if (reference.step_time &&
      !(*reference.step_time >= 0.0 && *reference.step_time < duration)) {
    throw std::invalid_argument("episode: step time must lie in [0, duration)");
  }
}

std::size_t EpisodeSpec::sample_count() const { return to_samples(duration, ts) + 1; }

std::size_t EpisodeSpec::activation_index() const {
  return reference.step_time ? to_samples(*reference.step_time, ts) : 0;
}

Trajectory run_episode(const EpisodeSpec& spec, const ControllerSuite& controllers,
                       const Params& plant) {
  spec.validate();
  Params p = plant;
  p.ts = spec.ts;
  p.validate();

  const std::size_t n = spec.sample_count();
  Trajectory traj;
  traj.ts = spec.ts;
  traj.activation_index = spec.activation_index();
  traj.t.reserve(n);
  traj.states.reserve(n);
  traj.u.reserve(n);
  traj.x_ref.reserve(n);

  PlantState s = spec.x0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x_ref = x_ref_at(spec.reference, k, traj.activation_index);
    const double u = controllers.control(spec.controller, s, x_ref).u;
    traj.t.push_back(static_cast<double>(k) * spec.ts);
    traj.states.push_back(s);
    traj.u.push_back(u);
    traj.x_ref.push_back(x_ref);
    if (k + 1 == n) break;
    try {
      s = integrate_step(s, u, p, spec.integrator);
    } catch (const DivergenceError&) {
      traj.diverged = true;
      break;
    }
  }
  return traj;
}

bool stability_satisfied(const PlantState& s, double x_ref, const StabilityBox& box) {
  return std::abs(s(kX) - x_ref) <= box.position && std::abs(s(kXDot)) <= box.velocity &&
         std::abs(s(kQ)) <= box.angle && std::abs(s(kQDot)) <= box.angular_rate;
}

std::optional<std::size_t> capture_index(const Trajectory& traj, double dwell,
                                         const StabilityBox& box) {
  if (traj.size() == 0) throw std::invalid_argument("capture_index: empty trajectory");
  if (!(dwell >= 0.0)) throw std::invalid_argument("capture_index: dwell must be >= 0");
  const std::size_t window = to_samples(dwell, traj.ts);
  std::size_t run_start = traj.activation_index;
  for (std::size_t k = traj.activation_index; k < traj.size(); ++k) {
    if (!stability_satisfied(traj.states[k], traj.x_ref[k], box)) {
      run_start = k + 1;
      continue;
    }
    if (k - run_start >= window) return run_start;
  }
  return std::nullopt;
}

std::optional<double> transient_time(const Trajectory& traj, double dwell,
                                     const StabilityBox& box) {
  const auto k = capture_index(traj, dwell, box);
  if (!k) return std::nullopt;
  return static_cast<double>(*k - traj.activation_index) * traj.ts;
}

double max_position_deviation(const Trajectory& traj) {
  if (traj.size() == 0) throw std::invalid_argument("max_position_deviation: empty trajectory");
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    worst = std::max(worst, std::abs(traj.states[k](kX) - traj.x_ref[k]));
  }
  return worst;
}

double control_effort(const Trajectory& traj, std::size_t first, std::size_t last) {
  if (last >= traj.size() || first > last) {
    throw std::out_of_range("control_effort: sample range outside the trajectory");
  }
  double sum = 0.0;
  for (std::size_t k = first; k <= last; ++k) sum += std::abs(traj.u[k]) * traj.ts;
  return sum;
}

double overshoot_percent(const Trajectory& traj) {
  const std::size_t k0 = traj.activation_index;
  if (k0 == 0 || k0 >= traj.size()) {
    throw std::invalid_argument("overshoot_percent: trajectory has no reference step");
  }
  const double step = traj.x_ref[k0] - traj.x_ref[k0 - 1];
  if (step == 0.0) throw std::invalid_argument("overshoot_percent: zero-magnitude step");
  const double direction = step > 0.0 ? 1.0 : -1.0;
  double peak = 0.0;
  for (std::size_t k = k0; k < traj.size(); ++k) {
    peak = std::max(peak, (traj.states[k](kX) - traj.x_ref[k]) * direction);
  }
  return 100.0 * peak / std::abs(step);
}

Metrics compute_metrics(const Trajectory& traj, double dwell, bool step_experiment,
                        const StabilityBox& box) {
  Metrics m;
  const auto k_star = capture_index(traj, dwell, box);
  m.stabilized = k_star.has_value();
  m.max_position_deviation = max_position_deviation(traj);
  const std::size_t k0 = traj.activation_index;
  if (k_star) {
    m.transient_time = static_cast<double>(*k_star - k0) * traj.ts;
    m.control_effort = control_effort(traj, k0, *k_star);
    const std::size_t settled = *k_star + to_samples(dwell, traj.ts);
    for (std::size_t k = settled; k < traj.size(); ++k) {
      if (!stability_satisfied(traj.states[k], traj.x_ref[k], box)) {
        m.left_box_after_capture = true;
        break;
      }
    }
  } else {
    m.control_effort = control_effort(traj, k0, traj.size() - 1);
    m.effort_over_full_episode = true;
  }
  if (step_experiment) m.overshoot_pct = overshoot_percent(traj);
  return m;
}

std::vector<ExperimentCell> run_cells(std::vector<ExperimentCell> cells,
                                      const ControllerSuite& controllers, const Params& plant,
                                      const HarnessOptions& options) {
  const auto evaluate = [&](ExperimentCell& cell) {
    cell.trajectory = run_episode(cell.spec, controllers, plant);
    cell.metrics = compute_metrics(cell.trajectory, options.dwell,
                                   cell.spec.reference.step_time.has_value());
  };
  if (options.parallel) {
    std::vector<std::future<void>> jobs;
    jobs.reserve(cells.size());
    for (ExperimentCell& cell : cells) {
      jobs.push_back(std::async(std::launch::async, [&evaluate, &cell] { evaluate(cell); }));
    }
    for (auto& job : jobs) job.get();
  } else {
    for (ExperimentCell& cell : cells) evaluate(cell);
  }
  return cells;
}

std::vector<ExperimentCell> run_experiment1(const ControllerSuite& controllers,
                                            const Params& plant, const HarnessOptions& options) {
  std::vector<ExperimentCell> cells;
  for (ControllerKind kind : options.controllers) {
    for (int degrees : {10, 20, 30}) {
      ExperimentCell cell{kind, "exp1", "q0_" + std::to_string(degrees) + "deg", {}, {}, {}};
      cell.spec.controller = kind;
      cell.spec.x0 = make_state(0.0, 0.0, degrees * std::numbers::pi / 180.0, 0.0);
      cell.spec.reference = Reference::constant(0.0);
      cell.spec.duration = options.duration;
      cell.spec.ts = plant.ts;
      cell.spec.integrator = options.integrator;
      cells.push_back(std::move(cell));
    }
  }
  return run_cells(std::move(cells), controllers, plant, options);
}

std::vector<ExperimentCell> run_experiment2(const ControllerSuite& controllers,
                                            const Params& plant, const HarnessOptions& options) {
  std::vector<ExperimentCell> cells;
  for (ControllerKind kind : options.controllers) {
    ExperimentCell cell{kind, "exp2", "xref_0.2m", {}, {}, {}};
    cell.spec.controller = kind;
    cell.spec.x0 = PlantState::Zero();
    cell.spec.reference = Reference::step(0.0, 1.0, 0.2);
    cell.spec.duration = options.duration;
    cell.spec.ts = plant.ts;
    cell.spec.integrator = options.integrator;
    cells.push_back(std::move(cell));
  }
  return run_cells(std::move(cells), controllers, plant, options);
}

ComparisonCell compare_values(double reference, double other) {
  if (reference == 0.0) {
    if (other == 0.0) return {0.0, false};
    return {std::nullopt, true};
  }
  return {(other - reference) / reference * 100.0, false};
}

ComparisonCell compare_overshoot(double reference_pct, double other_pct) {
  return {other_pct - reference_pct, false};
}

ComparisonRow compare(const Metrics& reference, const Metrics& other) {
  ComparisonRow row;
  if (reference.transient_time && other.transient_time) {
    row.transient_time = compare_values(*reference.transient_time, *other.transient_time);
  } else {
    row.transient_time.flagged = true;
  }
  row.max_position_deviation =
      compare_values(reference.max_position_deviation, other.max_position_deviation);
  row.control_effort = compare_values(reference.control_effort, other.control_effort);
  if (reference.effort_over_full_episode || other.effort_over_full_episode) {
    row.control_effort.flagged = true;
  }
  if (reference.overshoot_pct && other.overshoot_pct) {
    row.overshoot = compare_overshoot(*reference.overshoot_pct, *other.overshoot_pct);
  } else {
    row.overshoot.flagged = true;
  }
  return row;
}

std::string format_comparison(const ComparisonCell& cell) {
  if (!cell.percent) return "n/a";
  const long rounded = std::lround(*cell.percent);
  std::string text;
  if (rounded > 0) {
    text = "↑" + std::to_string(rounded) + "%";
  } else if (rounded < 0) {
    text = "↓" + std::to_string(-rounded) + "%";
  } else {
    text = "0%";
  }
  if (cell.flagged) text += "*";
  return text;
}

std::string format_metric(std::optional<double> value) {
  return value ? format_number(*value, 6) : "nan";
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,x_dot,q,q_dot,u,x_ref\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const PlantState& s = traj.states[k];
    os << format_number(traj.t[k], 12) << ',' << format_number(s(kX), 12) << ','
       << format_number(s(kXDot), 12) << ',' << format_number(s(kQ), 12) << ','
       << format_number(s(kQDot), 12) << ',' << format_number(traj.u[k], 12) << ','
       << format_number(traj.x_ref[k], 12) << '\n';
  }
}

void write_metrics_csv(std::ostream& os, const std::vector<ExperimentCell>& cells) {
  os << "controller,experiment,scenario,dt,dxm,sigma_u,overshoot_pct,stabilized\n";
  for (const ExperimentCell& c : cells) {
    const Metrics& m = c.metrics;
    os << controller_name(c.controller) << ',' << c.experiment << ',' << c.scenario << ','
       << format_metric(m.transient_time) << ',' << format_metric(m.max_position_deviation)
       << ',' << format_metric(m.control_effort) << ',' << format_metric(m.overshoot_pct)
       << ',' << (m.stabilized ? 1 : 0) << '\n';
  }
}

std::string trajectory_file_name(const ExperimentCell& cell) {
  return cell.experiment + "_" + std::string(controller_name(cell.controller)) + "_" +
         cell.scenario + ".csv";
}

namespace {

std::string display_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kRsHac:
      return "RS-HAC";
    case ControllerKind::kFuzzy:
      return "FC";
    case ControllerKind::kLqr:
      return "LQR";
  }
  return "?";
}

// Cells of one experiment, keyed by controller then scenario, in first-seen order.
struct ExperimentView {
  std::string name;
  std::vector<std::string> scenarios;
  std::vector<ControllerKind> controllers;
  std::map<std::pair<ControllerKind, std::string>, const ExperimentCell*> cells;
};

std::vector<ExperimentView> group(const std::vector<ExperimentCell>& cells) {
  std::vector<ExperimentView> views;
  for (const ExperimentCell& c : cells) {
    auto it = std::find_if(views.begin(), views.end(),
                           [&](const ExperimentView& v) { return v.name == c.experiment; });
    if (it == views.end()) {
      views.push_back({c.experiment, {}, {}, {}});
      it = views.end() - 1;
    }
    if (std::find(it->scenarios.begin(), it->scenarios.end(), c.scenario) ==
        it->scenarios.end()) {
      it->scenarios.push_back(c.scenario);
    }
    if (std::find(it->controllers.begin(), it->controllers.end(), c.controller) ==
        it->controllers.end()) {
      it->controllers.push_back(c.controller);
    }
    it->cells[{c.controller, c.scenario}] = &c;
  }
  return views;
}

constexpr int kNameWidth = 16;
constexpr int kCellWidth = 10;

bool is_step(const ExperimentCell& c) { return c.spec.reference.step_time.has_value(); }

void print_header(std::ostream& os, const ExperimentView& v) {
  os << std::left << std::setw(kNameWidth) << "";
  for (const std::string& s : v.scenarios) {
    os << std::setw(3 * kCellWidth) << s;
  }
  os << '\n' << std::setw(kNameWidth) << "";
  for (const std::string& s : v.scenarios) {
    const ExperimentCell* any = nullptr;
    for (ControllerKind k : v.controllers) {
      if (auto it = v.cells.find({k, s}); it != v.cells.end()) any = it->second;
    }
    const bool step = any && is_step(*any);
    os << std::setw(kCellWidth) << "dt" << std::setw(kCellWidth) << (step ? "%x_r" : "dxm")
       << std::setw(kCellWidth) << "sigma_u";
  }
  os << '\n';
}

}  // namespace

void print_summary(std::ostream& os, const std::vector<ExperimentCell>& cells) {
  for (const ExperimentView& v : group(cells)) {
    os << "== " << v.name << " ==\n";
    print_header(os, v);
    for (ControllerKind k : v.controllers) {
      os << std::setw(kNameWidth) << display_name(k);
      for (const std::string& s : v.scenarios) {
        const auto it = v.cells.find({k, s});
        if (it == v.cells.end()) {
          os << std::setw(3 * kCellWidth) << "-";
          continue;
        }
        const Metrics& m = it->second->metrics;
        const std::optional<double> middle =
            is_step(*it->second) ? m.overshoot_pct : std::optional(m.max_position_deviation);
        os << std::setw(kCellWidth) << format_metric(m.transient_time) << std::setw(kCellWidth)
           << format_metric(middle) << std::setw(kCellWidth)
           << (format_metric(m.control_effort) + (m.effort_over_full_episode ? "*" : ""));
      }
      os << '\n';
    }
    os << '\n';
  }
  os << std::right;
}

void print_comparison(std::ostream& os, const std::vector<ExperimentCell>& cells) {
  for (const ExperimentView& v : group(cells)) {
    if (std::find(v.controllers.begin(), v.controllers.end(), ControllerKind::kRsHac) ==
        v.controllers.end()) {
      continue;
    }
    os << "== " << v.name << ": RS-HAC against ==\n";
    print_header(os, v);
    for (ControllerKind k : v.controllers) {
      if (k == ControllerKind::kRsHac) continue;
      os << std::setw(kNameWidth) << display_name(k);
      for (const std::string& s : v.scenarios) {
        const auto ref = v.cells.find({ControllerKind::kRsHac, s});
        const auto other = v.cells.find({k, s});
        if (ref == v.cells.end() || other == v.cells.end()) {
          os << std::setw(3 * kCellWidth) << "-";
          continue;
        }
        const ComparisonRow row = compare(ref->second->metrics, other->second->metrics);
        const ComparisonCell& middle =
            is_step(*ref->second) ? row.overshoot : row.max_position_deviation;
        // setw counts bytes and the arrows are 3-byte UTF-8 sequences.
        for (const ComparisonCell* cell : {&row.transient_time, &middle, &row.control_effort}) {
          const std::string text = format_comparison(*cell);
          const int pad = text.rfind("↑", 0) == 0 || text.rfind("↓", 0) == 0 ? 2 : 0;
          os << std::setw(kCellWidth + pad) << text;
        }
      }
      os << '\n';
    }
    os << std::right << '\n';
  }
}

}  // namespace rshac
