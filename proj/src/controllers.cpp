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

#include "rshac/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "rshac/riccati.hpp"

namespace rshac {
namespace {

void require_finite(const PlantState& s, const char* who) {
  if (!s.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": plant state is not finite");
  }
}

Map output_map(double u_min, double u_max) { return Map::linear(u_min, u_max, 0.0, 1.0); }

// Offsets the cart position by the reference; the other channels are
// regulated to zero.
ChannelVector channel_errors(const PlantState& s, double x_ref) {
  ChannelVector e = s;
  e(kX) -= x_ref;
  return e;
}

}  // namespace

double saturate(double u, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("saturate: need lo < hi");
  return std::clamp(u, lo, hi);
}

ChannelVector adaptive_weights(double q, double l1, double l2) {
  if (!(l1 > 0.0 && l1 < l2)) {
    throw std::invalid_argument("adaptive_weights: need 0 < l1 < l2");
  }
  const double a = std::abs(q);
  if (a <= l1) return ChannelVector::Constant(0.25);
  if (a >= l2) return ChannelVector(0.0, 0.0, 1.0, 0.0);
  const double w_q = 0.25 + (a - l1) * (1.0 - 0.25) / (l2 - l1);
  const double w_q_dot = (1.0 - w_q) / 2.0;
  const double w_cart = (1.0 - w_q - w_q_dot) / 2.0;
  return ChannelVector(w_cart, w_cart, w_q, w_q_dot);
}

// ---------------------------------------------------------------------------
// RS-HAC

RsHacConfig RsHacConfig::defaults() {
  RsHacConfig cfg;
  cfg.channels[kX] = {Map::linear(-0.43, 0.43), {7, 0.5, 0.5}, {7, 0.5, 0.35}};
  cfg.channels[kXDot] = {Map::linear(-2.0, 2.0), {5, 0.5, 0.5}, {5, 0.5, 0.8}};
  cfg.channels[kQ] = {Map::sigmoid(8.0), {5, 0.5, 0.5}, {5, 0.5, 0.725}};
  cfg.channels[kQDot] = {Map::sigmoid(0.45), {7, 0.5, 0.5}, {7, 0.5, 0.8}};
  return cfg;
}

void RsHacConfig::validate() const {
  if (!(l1 > 0.0 && l1 < l2 && l2 < std::numbers::pi / 2)) {
    throw std::invalid_argument("rshac: weight thresholds need 0 < l1 < l2 < pi/2");
  }
  if (!(u_min < u_max) || !std::isfinite(u_min) || !std::isfinite(u_max)) {
    throw std::invalid_argument("rshac: control bounds need u_min < u_max");
  }
  for (const ChannelSpec& ch : channels) {
    const Frame state = generate_sqsm(ch.state.n_labels, ch.state.theta, ch.state.alpha);
    const Frame control =
        generate_sqsm(ch.control.n_labels, ch.control.theta, ch.control.alpha);
    // Throws on mismatched label counts or, with anchors, values outside (0,1).
    build_inference_line(state, control, anchor_constants);
  }
}

RsHacController::RsHacController(RsHacConfig config) : config_(std::move(config)) {
  config_.validate();
  const bool bounds_symmetric = config_.u_min == -config_.u_max;
  for (int i = 0; i < 4; ++i) {
    const ChannelSpec& ch = config_.channels[i];
    lines_[i] = build_inference_line(
        generate_sqsm(ch.state.n_labels, ch.state.theta, ch.state.alpha),
        generate_sqsm(ch.control.n_labels, ch.control.theta, ch.control.alpha),
        config_.anchor_constants);
    symmetric_[i] = bounds_symmetric && ch.map.is_centered() && lines_[i].is_symmetric();
  }
}

double RsHacController::channel_output_direct(int channel, double crisp) const {
  const double xs = semantize(config_.channels[channel].map, crisp);
  const double us = infer(lines_[channel], xs);
  return desemantize(output_map(config_.u_min, config_.u_max), us);
}

// A channel that is odd about zero is evaluated on |e| and the sign restored;
// this is the same function, but negating the state negates u bit-for-bit.
double RsHacController::channel_output(int channel, double crisp) const {
  if (symmetric_[channel] && crisp < 0.0) return -channel_output_direct(channel, -crisp);
  return channel_output_direct(channel, crisp);
}

ControlOutput RsHacController::operator()(const PlantState& s, double x_ref) const {
  require_finite(s, "rshac_control");
  const ChannelVector e = channel_errors(s, x_ref);
  ControlOutput out;
  for (int i = 0; i < 4; ++i) out.intermediates(i) = channel_output(i, e(i));
  out.weights = adaptive_weights(s(kQ), config_.l1, config_.l2);
  out.u = saturate(out.weights.dot(out.intermediates), config_.u_min, config_.u_max);
  return out;
}

ControlOutput rshac_control(const PlantState& s, double x_ref, const RsHacConfig& cfg) {
  return RsHacController(cfg)(s, x_ref);
}

// ---------------------------------------------------------------------------
// Fuzzy (SIRM)

double Triangle::operator()(double x) const {
  if (x < lo || x > hi) return 0.0;
  if (x == peak) return 1.0;
  if (x < peak) return (x - lo) / (peak - lo);
  return (hi - x) / (hi - peak);
}

void FuzzyConfig::validate() const {
  pipeline.validate();
  for (const Triangle& t : memberships) {
    if (!(t.lo <= t.peak && t.peak <= t.hi && t.lo < t.hi)) {
      throw std::invalid_argument("fuzzy: membership needs lo <= peak <= hi and lo < hi");
    }
  }
  for (double c : singletons) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw std::invalid_argument("fuzzy: output singletons must lie in [0,1]");
    }
  }
  const Triangle& zero = memberships[1];
  for (int i : {0, 2}) {
    const Triangle& t = memberships[i];
    const bool contains = zero.lo <= t.lo && zero.hi >= t.hi;
    if (!contains || !(zero.hi - zero.lo > t.hi - t.lo)) {
      throw std::invalid_argument("fuzzy: Zero support must strictly contain the others");
    }
  }
  constexpr int kGrid = 1000;
  for (int k = 0; k <= kGrid; ++k) {
    const double x = static_cast<double>(k) / kGrid;
    double sum = 0.0;
    for (const Triangle& t : memberships) sum += t(x);
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("fuzzy: memberships must form a partition of unity on [0,1]");
    }
  }
}

double sirm_infer(double xs, const FuzzyConfig& cfg) {
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double mu = cfg.memberships[i](xs);
    num += mu * cfg.singletons[i];
    den += mu;
  }
  if (den == 0.0) {
    throw std::domain_error("sirm_infer: no rule fires at " + std::to_string(xs));
  }
  return num / den;
}

FuzzyController::FuzzyController(FuzzyConfig config) : config_(std::move(config)) {
  config_.validate();
  const auto& m = config_.memberships;
  const auto& c = config_.singletons;
  const bool rules_symmetric = m[0].lo == 1.0 - m[2].hi && m[0].peak == 1.0 - m[2].peak &&
                               m[0].hi == 1.0 - m[2].lo && m[1].peak == 0.5 &&
                               m[1].lo == 1.0 - m[1].hi && c[0] == 1.0 - c[2] && c[1] == 0.5;
  const RsHacConfig& p = config_.pipeline;
  for (int i = 0; i < 4; ++i) {
    symmetric_[i] = rules_symmetric && p.u_min == -p.u_max && p.channels[i].map.is_centered();
  }
}

double FuzzyController::channel_output_direct(int channel, double crisp) const {
  const RsHacConfig& p = config_.pipeline;
  const double xs = semantize(p.channels[channel].map, crisp);
  return desemantize(output_map(p.u_min, p.u_max), sirm_infer(xs, config_));
}

double FuzzyController::channel_output(int channel, double crisp) const {
  if (symmetric_[channel] && crisp < 0.0) return -channel_output_direct(channel, -crisp);
  return channel_output_direct(channel, crisp);
}

ChannelVector FuzzyController::semantic_inputs(const PlantState& s, double x_ref) const {
  const ChannelVector e = channel_errors(s, x_ref);
  ChannelVector xs;
  for (int i = 0; i < 4; ++i) xs(i) = semantize(config_.pipeline.channels[i].map, e(i));
  return xs;
}

ChannelVector FuzzyController::semantic_outputs(const PlantState& s, double x_ref) const {
  ChannelVector us = semantic_inputs(s, x_ref);
  for (int i = 0; i < 4; ++i) us(i) = sirm_infer(us(i), config_);
  return us;
}

ControlOutput FuzzyController::operator()(const PlantState& s, double x_ref) const {
  require_finite(s, "fuzzy_control");
  const RsHacConfig& p = config_.pipeline;
  const ChannelVector e = channel_errors(s, x_ref);
  ControlOutput out;
  for (int i = 0; i < 4; ++i) out.intermediates(i) = channel_output(i, e(i));
  out.weights = adaptive_weights(s(kQ), p.l1, p.l2);
  out.u = saturate(out.weights.dot(out.intermediates), p.u_min, p.u_max);
  return out;
}

ControlOutput fuzzy_control(const PlantState& s, double x_ref, const FuzzyConfig& cfg) {
  return FuzzyController(cfg)(s, x_ref);
}

// ---------------------------------------------------------------------------
// LQR

void LqrConfig::validate() const {
  if (!(R > 0.0)) throw std::invalid_argument("lqr: R must be > 0");
  if (!Q.isApprox(Q.transpose())) throw std::invalid_argument("lqr: Q must be symmetric");
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(Q);
  if (eig.eigenvalues().minCoeff() < -1e-12) {
    throw std::invalid_argument("lqr: Q must be positive semidefinite");
  }
  if (!published_gain.allFinite()) throw std::invalid_argument("lqr: gain must be finite");
  if (!(u_min < u_max)) throw std::invalid_argument("lqr: need u_min < u_max");
}

LqrDesign lqr_gain(const LqrConfig& cfg, const Model& discrete_model) {
  if (!discrete_model.discrete) {
    throw std::invalid_argument("lqr_gain: expects a discrete model");
  }
  cfg.validate();
  const Eigen::Matrix<double, 1, 1> R = Eigen::Matrix<double, 1, 1>::Constant(cfg.R);
  const auto sol = solve_dare<double, 4, 1>(discrete_model.A, discrete_model.B, cfg.Q, R);
  LqrDesign design;
  design.P = sol.P;
  design.iterations = sol.iterations;
  design.K = dare_gain<double, 4, 1>(sol.P, discrete_model.A, discrete_model.B, R);
  design.residual = dare_residual<double, 4, 1>(sol.P, discrete_model.A, discrete_model.B,
                                                cfg.Q, R);
  const Eigen::Vector4d poles = closed_loop_pole_magnitudes(discrete_model, design.K);
  if (!(poles(0) < 1.0)) {
    throw std::runtime_error("lqr_gain: closed loop is not stable");
  }
  return design;
}

Eigen::Vector4d closed_loop_pole_magnitudes(const Model& discrete_model,
                                            const Eigen::RowVector4d& K) {
  const Eigen::Matrix4d closed = discrete_model.A - discrete_model.B * K;
  const Eigen::EigenSolver<Eigen::Matrix4d> eig(closed, /*computeEigenvectors=*/false);
  Eigen::Vector4d mags = eig.eigenvalues().cwiseAbs();
  std::sort(mags.data(), mags.data() + 4, std::greater<>());
  return mags;
}

ControlOutput lqr_control(const PlantState& s, double x_ref, const Eigen::RowVector4d& K,
                          double u_min, double u_max) {
  require_finite(s, "lqr_control");
  const ChannelVector e = channel_errors(s, x_ref);
  ControlOutput out;
  out.intermediates = -K.transpose().cwiseProduct(e);
  out.weights = ChannelVector::Constant(0.25);
  out.u = saturate(out.intermediates.sum(), u_min, u_max);
  return out;
}

LqrController::LqrController(const LqrConfig& cfg, const Params& plant)
    : u_min_(cfg.u_min), u_max_(cfg.u_max) {
  cfg.validate();
  if (cfg.source == GainSource::kPublished) {
    K_ = cfg.published_gain;
  } else {
    K_ = lqr_gain(cfg, discretize(linearize(plant), plant.ts)).K;
  }
}

// ---------------------------------------------------------------------------

std::string_view controller_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kRsHac:
      return "rshac";
    case ControllerKind::kFuzzy:
      return "fc";
    case ControllerKind::kLqr:
      return "lqr";
  }
  return "?";
}

ControllerKind parse_controller(std::string_view name) {
  if (name == "rshac") return ControllerKind::kRsHac;
  if (name == "fc") return ControllerKind::kFuzzy;
  if (name == "lqr") return ControllerKind::kLqr;
  throw std::invalid_argument("unknown controller '" + std::string(name) + "'");
}

ControlOutput ControllerSuite::control(ControllerKind kind, const PlantState& s,
                                       double x_ref) const {
  switch (kind) {
    case ControllerKind::kRsHac:
      return rshac(s, x_ref);
    case ControllerKind::kFuzzy:
      return fuzzy(s, x_ref);
    case ControllerKind::kLqr:
      return lqr(s, x_ref);
  }
  throw std::logic_error("unknown controller kind");
}

}  // namespace rshac
