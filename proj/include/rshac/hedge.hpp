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

// Hedge-algebra primitives: recursive semantic value lists (SQSM), semantic
// indexing, crisp <-> semantic maps and interpolation-line inference.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rshac {

/// Position of the neutral label in an odd-length ordered label set (1-based).
inline int msi(int n_labels) {
  if (n_labels < 1 || n_labels % 2 == 0) {
    throw std::invalid_argument("msi: label count must be odd and positive, got " +
                                std::to_string(n_labels));
  }
  return (n_labels - 1) / 2 + 1;
}

/// An ordered set of linguistic labels together with their semantic values.
///
/// Values are strictly increasing, symmetric about theta and lie in
/// (0, 2 theta). Frames are only produced by generate_sqsm(), so every
/// instance satisfies these invariants.
template <typename Scalar>
class LinguisticFrame {
 public:
  int n_labels() const { return static_cast<int>(values_.size()); }
  Scalar theta() const { return theta_; }
  Scalar alpha() const { return alpha_; }
  const std::vector<Scalar>& values() const { return values_; }
  Scalar value(std::size_t index0) const { return values_.at(index0); }

  /// Optional label names in semantic order; empty unless attached.
  const std::vector<std::string>& labels() const { return labels_; }

  /// Returns a copy carrying the given label names.
  LinguisticFrame with_labels(std::vector<std::string> names) const {
    if (names.size() != values_.size()) {
      throw std::invalid_argument("with_labels: expected " + std::to_string(values_.size()) +
                                  " names, got " + std::to_string(names.size()));
    }
    LinguisticFrame copy = *this;
    copy.labels_ = std::move(names);
    return copy;
  }

 private:
  template <typename S>
  friend LinguisticFrame<S> generate_sqsm(int, S, S);

  Scalar theta_{};
  Scalar alpha_{};
  std::vector<Scalar> values_;
  std::vector<std::string> labels_;
};

namespace detail {
template <typename Scalar>
void require_unit_open(Scalar v, const char* what) {
  if (!(v > Scalar(0) && v < Scalar(1))) {
    throw std::invalid_argument(std::string(what) + " must lie in (0,1), got " +
                                std::to_string(static_cast<double>(v)));
  }
}
}  // namespace detail

/// Generates the semantic values of an n-label frame with the two-sided
/// recursion: label i below the neutral one gets theta (1 - alpha^i) and its
/// mirror n + 1 - i gets theta (1 + alpha^i). Runs (n - 1) / 2 iterations.
template <typename Scalar>
LinguisticFrame<Scalar> generate_sqsm(int n_labels, Scalar theta, Scalar alpha) {
  const int median = msi(n_labels);
  detail::require_unit_open(theta, "theta");
  detail::require_unit_open(alpha, "alpha");

  LinguisticFrame<Scalar> frame;
  frame.theta_ = theta;
  frame.alpha_ = alpha;
  frame.values_.assign(static_cast<std::size_t>(n_labels), Scalar(0));
  frame.values_[median - 1] = theta;

  Scalar power = alpha;  // alpha^i
  for (int i = 1; i < median; ++i) {
    frame.values_[i - 1] = theta * (Scalar(1) - power);
    frame.values_[n_labels - i] = theta * (Scalar(1) + power);
    power *= alpha;
  }
  return frame;
}

/// 1-based index of a named label in the frame's semantic ordering.
template <typename Scalar>
int sie(std::string_view label, const LinguisticFrame<Scalar>& frame) {
  const auto& names = frame.labels();
  const auto it = std::find(names.begin(), names.end(), label);
  if (it == names.end()) {
    throw std::invalid_argument("sie: unknown label '" + std::string(label) + "'");
  }
  return static_cast<int>(it - names.begin()) + 1;
}

/// Labels of the seven-term SIZE variable (hedges "very"/"little" over the
/// generators "small"/"big"), in semantic order.
inline std::vector<std::string> size_labels() {
  return {"very small", "small", "little small", "neutral", "little big", "big", "very big"};
}

/// Closed-form classical SQM values of the seven SIZE labels. Kept as a
/// cross-check against generate_sqsm; the two agree only at the neutral label.
template <typename Scalar>
std::array<Scalar, 7> sqm_size_reference(Scalar theta, Scalar alpha) {
  detail::require_unit_open(theta, "theta");
  detail::require_unit_open(alpha, "alpha");
  const Scalar one(1);
  const Scalar beta = one - alpha;
  return {
      theta * beta * beta,
      theta * beta,
      theta * (one - alpha + alpha * alpha),
      theta,
      theta + alpha * (one - theta) * (one - alpha),
      theta + alpha * (one - theta),
      theta + alpha * (one - theta) * (Scalar(2) - alpha),
  };
}

enum class SemanticMapKind { kLinear, kSigmoid };

/// Bijective map between a crisp variable and its semantic value.
///
/// Linear maps send [crisp_lo, crisp_hi] affinely onto [sem_lo, sem_hi].
/// Sigmoid maps are the logistic 1 / (1 + exp(-slope (x - center))) from the
/// whole real line onto (0, 1).
template <typename Scalar>
class SemanticMap {
 public:
  static SemanticMap linear(Scalar crisp_lo, Scalar crisp_hi, Scalar sem_lo = Scalar(0),
                            Scalar sem_hi = Scalar(1)) {
    if (!(crisp_lo < crisp_hi)) {
      throw std::invalid_argument("linear semantic map: crisp_lo must be < crisp_hi");
    }
    if (!(sem_lo < sem_hi) || sem_lo < Scalar(0) || sem_hi > Scalar(1)) {
      throw std::invalid_argument(
          "linear semantic map: need 0 <= sem_lo < sem_hi <= 1");
    }
    SemanticMap map;
    map.kind_ = SemanticMapKind::kLinear;
    map.p_ = {crisp_lo, crisp_hi, sem_lo, sem_hi};
    return map;
  }

  static SemanticMap sigmoid(Scalar slope, Scalar center = Scalar(0)) {
    if (!(slope > Scalar(0)) || !std::isfinite(slope)) {
      throw std::invalid_argument("sigmoid semantic map: slope must be finite and > 0");
    }
    if (!std::isfinite(center)) {
      throw std::invalid_argument("sigmoid semantic map: center must be finite");
    }
    SemanticMap map;
    map.kind_ = SemanticMapKind::kSigmoid;
    map.p_ = {slope, center, Scalar(0), Scalar(1)};
    return map;
  }

  SemanticMapKind kind() const { return kind_; }
  bool is_linear() const { return kind_ == SemanticMapKind::kLinear; }

  Scalar crisp_lo() const { return p_[0]; }
  Scalar crisp_hi() const { return p_[1]; }
  Scalar sem_lo() const { return p_[2]; }
  Scalar sem_hi() const { return p_[3]; }
  Scalar slope() const { return p_[0]; }
  Scalar center() const { return p_[1]; }

  /// True when semantize(-x) = 1 - semantize(x), i.e. crisp zero sits at the
  /// semantic value 1/2 and the map is odd about it.
  bool is_centered() const {
    if (is_linear()) return crisp_lo() == -crisp_hi() && sem_lo() + sem_hi() == Scalar(1);
    return center() == Scalar(0);
  }

 private:
  SemanticMapKind kind_ = SemanticMapKind::kLinear;
  std::array<Scalar, 4> p_{};
};

/// Crisp -> semantic. Linear maps clamp inputs to the crisp domain first.
template <typename Scalar>
Scalar semantize(const SemanticMap<Scalar>& map, Scalar x) {
  if (map.is_linear()) {
    const Scalar clamped = std::clamp(x, map.crisp_lo(), map.crisp_hi());
    return map.sem_lo() +
           (clamped - map.crisp_lo()) * (map.sem_hi() - map.sem_lo()) /
               (map.crisp_hi() - map.crisp_lo());
  }
  return Scalar(1) / (Scalar(1) + std::exp(-map.slope() * (x - map.center())));
}

/// Semantic -> crisp, the exact inverse of semantize on the map's domain.
template <typename Scalar>
Scalar desemantize(const SemanticMap<Scalar>& map, Scalar xs) {
  if (map.is_linear()) {
    if (!(xs >= map.sem_lo() && xs <= map.sem_hi())) {
      throw std::domain_error("desemantize: semantic value " +
                              std::to_string(static_cast<double>(xs)) +
                              " outside the map's semantic domain");
    }
    return map.crisp_lo() +
           (xs - map.sem_lo()) * (map.crisp_hi() - map.crisp_lo()) /
               (map.sem_hi() - map.sem_lo());
  }
  if (!(xs > Scalar(0) && xs < Scalar(1))) {
    throw std::domain_error("desemantize: sigmoid inverse needs a value in (0,1)");
  }
  // Inverse of the logistic: x = c + ln(xs / (1 - xs)) / a.
  return map.center() + std::log(xs / (Scalar(1) - xs)) / map.slope();
}

/// Piecewise-linear map between two semantic domains.
template <typename Scalar>
class InferenceLine {
 public:
  using Knot = std::pair<Scalar, Scalar>;

  InferenceLine() = default;

  explicit InferenceLine(std::vector<Knot> knots) : knots_(std::move(knots)) {
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      if (!(knots_[i].first > knots_[i - 1].first)) {
        throw std::invalid_argument("inference line: knot inputs must be strictly increasing");
      }
      if (knots_[i].second < knots_[i - 1].second) {
        throw std::invalid_argument("inference line: knot outputs must be non-decreasing");
      }
    }
  }

  const std::vector<Knot>& knots() const { return knots_; }
  std::size_t size() const { return knots_.size(); }
  bool empty() const { return knots_.empty(); }

  /// True when the line is point-symmetric about (1/2, 1/2) within tol.
  bool is_symmetric(Scalar tol = Scalar(1e-12)) const {
    const std::size_t n = knots_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Knot& a = knots_[i];
      const Knot& b = knots_[n - 1 - i];
      if (std::abs(a.first + b.first - Scalar(1)) > tol ||
          std::abs(a.second + b.second - Scalar(1)) > tol) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Knot> knots_;
};

/// Pairs the i-th state label with the i-th control label. With
/// `anchor_constants` the semantic constants 0 and 1 are added as end knots,
/// so inputs beyond the outermost labels keep interpolating to the boundary.
template <typename Scalar>
InferenceLine<Scalar> build_inference_line(const LinguisticFrame<Scalar>& state_frame,
                                           const LinguisticFrame<Scalar>& control_frame,
                                           bool anchor_constants = false) {
  if (state_frame.n_labels() != control_frame.n_labels()) {
    throw std::invalid_argument("build_inference_line: state frame has " +
                                std::to_string(state_frame.n_labels()) +
                                " labels but control frame has " +
                                std::to_string(control_frame.n_labels()));
  }
  std::vector<typename InferenceLine<Scalar>::Knot> knots;
  knots.reserve(state_frame.values().size() + 2);
  if (anchor_constants) knots.emplace_back(Scalar(0), Scalar(0));
  for (std::size_t i = 0; i < state_frame.values().size(); ++i) {
    knots.emplace_back(state_frame.values()[i], control_frame.values()[i]);
  }
  if (anchor_constants) {
    const auto inside = [](Scalar v) { return v > Scalar(0) && v < Scalar(1); };
    for (std::size_t i = 1; i < knots.size(); ++i) {
      if (!inside(knots[i].first) || !inside(knots[i].second)) {
        throw std::invalid_argument(
            "build_inference_line: anchoring needs every label value inside (0,1)");
      }
    }
    knots.emplace_back(Scalar(1), Scalar(1));
  }
  return InferenceLine<Scalar>(std::move(knots));
}

/// Interpolates the line at xs; inputs outside the knot range are clamped to
/// the end knots.
template <typename Scalar>
Scalar infer(const InferenceLine<Scalar>& line, Scalar xs) {
  if (line.empty()) throw std::invalid_argument("infer: empty inference line");
  const auto& k = line.knots();
  if (!(xs > k.front().first)) return k.front().second;
  if (!(xs < k.back().first)) return k.back().second;
  // First knot with input > xs; xs lies in [k[hi-1].first, k[hi].first).
  const auto hi = std::upper_bound(k.begin(), k.end(), xs,
                                   [](Scalar v, const auto& knot) { return v < knot.first; });
  const auto lo = hi - 1;
  return lo->second + (xs - lo->first) * (hi->second - lo->second) / (hi->first - lo->first);
}

using Frame = LinguisticFrame<double>;
using Map = SemanticMap<double>;
using Line = InferenceLine<double>;

}  // namespace rshac
