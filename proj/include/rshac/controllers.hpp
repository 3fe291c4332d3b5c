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

// Cart-pole balance controllers. All three emit a saturated cart
// acceleration [m/s^2]:
//
//   * RsHacController  - hedge-algebra controller: semantize each state,
//                        infer along per-channel SQSM lines, de-semantize and
//                        combine with angle-dependent weights.
//   * FuzzyController  - same pipeline with single-input rule modules in
//                        place of the SQSM lines.
//   * LqrController    - static state feedback.

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rshac/hedge.hpp"
#include "rshac/plant.hpp"

namespace rshac {

/// Per-channel weights / values in state order [x, x_dot, q, q_dot].
using ChannelVector = Eigen::Vector4d;

struct ControlOutput {
  double u = 0.0;
  ChannelVector intermediates = ChannelVector::Zero();
  ChannelVector weights = ChannelVector::Constant(0.25);
};

double saturate(double u, double lo, double hi);

/// Angle-scheduled channel weights [w_x, w_xdot, w_q, w_qdot].
///
/// Equal weights while |q| <= l1, all weight on the angle channel once
/// |q| >= l2, and a linear hand-over in between where the remaining weight
/// is split half to q_dot and a quarter each to x and x_dot.
ChannelVector adaptive_weights(double q, double l1, double l2);

struct FrameSpec {
  int n_labels = 1;
  double theta = 0.5;
  double alpha = 0.5;
};

struct ChannelSpec {
  Map map = Map::linear(-1.0, 1.0);
  FrameSpec state;
  FrameSpec control;
};

struct RsHacConfig {
  std::array<ChannelSpec, 4> channels;
  double u_min = -29.42;
  double u_max = 29.42;
  double l1 = 0.09;
  double l2 = 0.87;
  /// Adds the semantic constants (0,0) and (1,1) as end knots of every line.
  bool anchor_constants = true;

  /// The tuned cart-pole design.
  static RsHacConfig defaults();
  void validate() const;
};

class RsHacController {
 public:
  explicit RsHacController(RsHacConfig config);

  ControlOutput operator()(const PlantState& s, double x_ref) const;

  const RsHacConfig& config() const { return config_; }
  const Line& line(StateIndex channel) const { return lines_[channel]; }

 private:
  double channel_output(int channel, double crisp) const;
  double channel_output_direct(int channel, double crisp) const;

  RsHacConfig config_;
  std::array<Line, 4> lines_;
  std::array<bool, 4> symmetric_{};
};

ControlOutput rshac_control(const PlantState& s, double x_ref, const RsHacConfig& cfg);

/// Triangular membership function with support [lo, hi] and apex at peak.
/// lo == peak or peak == hi gives a shoulder that is 1 at the boundary.
struct Triangle {
  double lo = 0.0;
  double peak = 0.0;
  double hi = 0.0;

  double operator()(double x) const;
};

struct FuzzyConfig {
  /// Negative, Zero, Positive over the semantic domain [0, 1].
  std::array<Triangle, 3> memberships{Triangle{0.0, 0.0, 0.5}, Triangle{0.0, 0.5, 1.0},
                                      Triangle{0.5, 1.0, 1.0}};
  std::array<double, 3> singletons{0.0, 0.5, 1.0};
  /// Semantization, de-semantization, bounds and weights are shared with the
  /// hedge-algebra pipeline; its lines are unused.
  RsHacConfig pipeline = RsHacConfig::defaults();

  static FuzzyConfig defaults() { return {}; }
  void validate() const;
};

/// Weighted-average output of one single-input rule module.
double sirm_infer(double xs, const FuzzyConfig& cfg);

class FuzzyController {
 public:
  explicit FuzzyController(FuzzyConfig config);

  ControlOutput operator()(const PlantState& s, double x_ref) const;

  /// Stage-1 semantic value of every channel, exposed for inspection.
  ChannelVector semantic_inputs(const PlantState& s, double x_ref) const;
  /// Stage-2 semantic output of every channel.
  ChannelVector semantic_outputs(const PlantState& s, double x_ref) const;

  const FuzzyConfig& config() const { return config_; }

 private:
  double channel_output(int channel, double crisp) const;
  double channel_output_direct(int channel, double crisp) const;

  FuzzyConfig config_;
  std::array<bool, 4> symmetric_{};
};

ControlOutput fuzzy_control(const PlantState& s, double x_ref, const FuzzyConfig& cfg);

enum class GainSource { kPublished, kDare };

struct LqrConfig {
  Eigen::Matrix4d Q = Eigen::Vector4d(40.0, 1.0, 100.0, 2.0).asDiagonal();
  double R = 2.0;
  GainSource source = GainSource::kPublished;
  /// Gain reported for the reference rig, applied as u = -K (s - s_ref).
  Eigen::RowVector4d published_gain{-13.95, -11.69, -56.16, -7.89};
  double u_min = -29.42;
  double u_max = 29.42;

  static LqrConfig defaults() { return {}; }
  void validate() const;
};

struct LqrDesign {
  Eigen::RowVector4d K;
  Eigen::Matrix4d P;
  long long iterations = 0;
  double residual = 0.0;
};

/// Infinite-horizon discrete LQR design on a discrete model. The returned K
/// is for the law u = -K x.
LqrDesign lqr_gain(const LqrConfig& cfg, const Model& discrete_model);

/// Moduli of the eigenvalues of A_d - B_d K, sorted descending.
Eigen::Vector4d closed_loop_pole_magnitudes(const Model& discrete_model,
                                            const Eigen::RowVector4d& K);

ControlOutput lqr_control(const PlantState& s, double x_ref, const Eigen::RowVector4d& K,
                          double u_min, double u_max);

class LqrController {
 public:
  /// Uses the published gain or designs one on the Euler-discretized plant,
  /// depending on cfg.source.
  LqrController(const LqrConfig& cfg, const Params& plant);

  ControlOutput operator()(const PlantState& s, double x_ref) const {
    return lqr_control(s, x_ref, K_, u_min_, u_max_);
  }
  const Eigen::RowVector4d& gain() const { return K_; }

 private:
  Eigen::RowVector4d K_;
  double u_min_;
  double u_max_;
};

enum class ControllerKind { kRsHac, kFuzzy, kLqr };

std::string_view controller_name(ControllerKind kind);
ControllerKind parse_controller(std::string_view name);

/// The three controllers built from one configuration.
struct ControllerSuite {
  RsHacController rshac;
  FuzzyController fuzzy;
  LqrController lqr;

  ControllerSuite(const RsHacConfig& rs, const FuzzyConfig& fc, const LqrConfig& lq,
                  const Params& plant)
      : rshac(rs), fuzzy(fc), lqr(lq, plant) {}

  ControlOutput control(ControllerKind kind, const PlantState& s, double x_ref) const;
};

}  // namespace rshac
