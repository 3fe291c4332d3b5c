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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "rshac/riccati.hpp"

namespace rshac {
namespace {

constexpr double kUMax = 29.42;

TEST(SaturateTest, Clamps) {
  EXPECT_EQ(saturate(40.0, -kUMax, kUMax), kUMax);
  EXPECT_EQ(saturate(-40.0, -kUMax, kUMax), -kUMax);
  EXPECT_EQ(saturate(1.5, -kUMax, kUMax), 1.5);
  EXPECT_THROW(saturate(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST(AdaptiveWeightsTest, Regions) {
  EXPECT_EQ(adaptive_weights(0.05, 0.09, 0.87), ChannelVector::Constant(0.25));
  EXPECT_EQ(adaptive_weights(-0.09, 0.09, 0.87), ChannelVector::Constant(0.25));
  EXPECT_EQ(adaptive_weights(1.0, 0.09, 0.87), ChannelVector(0, 0, 1, 0));
  EXPECT_EQ(adaptive_weights(-0.87, 0.09, 0.87), ChannelVector(0, 0, 1, 0));
  const ChannelVector w = adaptive_weights(0.48, 0.09, 0.87);
  EXPECT_NEAR(w(kQ), 0.625, 1e-15);
  EXPECT_NEAR(w(kQDot), 0.1875, 1e-15);
  EXPECT_NEAR(w(kX), 0.09375, 1e-15);
  EXPECT_NEAR(w(kXDot), 0.09375, 1e-15);
  EXPECT_EQ(adaptive_weights(-0.48, 0.09, 0.87), w);
  EXPECT_THROW(adaptive_weights(0.1, 0.5, 0.2), std::invalid_argument);
}

TEST(AdaptiveWeightsTest, SumToOneAndContinuousAtUpperThreshold) {
  for (double q = -1.6; q <= 1.6; q += 0.001) {
    EXPECT_NEAR(adaptive_weights(q, 0.09, 0.87).sum(), 1.0, 1e-12);
  }
  const ChannelVector below = adaptive_weights(std::nextafter(0.87, 0.0), 0.09, 0.87);
  EXPECT_LT((below - ChannelVector(0, 0, 1, 0)).cwiseAbs().maxCoeff(), 1e-12);
}

// Straight-line interpolation through (xs_i, us_i) pairs, clamped at the ends.
double interpolate(const std::vector<double>& xs, const std::vector<double>& us, double x) {
  if (x <= xs.front()) return us.front();
  if (x >= xs.back()) return us.back();
  std::size_t i = 1;
  while (xs[i] < x) ++i;
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return us[i - 1] + t * (us[i] - us[i - 1]);
}

TEST(RsHacTest, MatchesHandComputedCartChannel) {
  const double x = 0.1;
  const double xs = 0.5 + x / 0.86;
  const std::vector<double> state{0, 0.25, 0.375, 0.4375, 0.5, 0.5625, 0.625, 0.75, 1};
  const std::vector<double> control{0,
                                    0.5 * (1 - 0.35),
                                    0.5 * (1 - 0.35 * 0.35),
                                    0.5 * (1 - 0.35 * 0.35 * 0.35),
                                    0.5,
                                    0.5 * (1 + 0.35 * 0.35 * 0.35),
                                    0.5 * (1 + 0.35 * 0.35),
                                    0.5 * (1 + 0.35),
                                    1};
  const double u_x = interpolate(state, control, xs) * 2 * kUMax - kUMax;

  const RsHacController c(RsHacConfig::defaults());
  const ControlOutput out = c(make_state(x, 0, 0, 0), 0.0);
  EXPECT_NEAR(out.intermediates(kX), u_x, 1e-12);
  EXPECT_NEAR(out.intermediates(kXDot), 0.0, 1e-12);
  EXPECT_NEAR(out.u, 0.25 * u_x, 1e-12);
  EXPECT_GT(out.u, 0.0);
}

TEST(RsHacTest, SignRules) {
  const RsHacController c(RsHacConfig::defaults());
  EXPECT_GT(c(make_state(0, 0, 0.05, 0), 0.0).intermediates(kQ), 0.0);
  EXPECT_GT(c(make_state(0, 0, 0.05, 0), 0.0).u, 0.0);
  EXPECT_GT(c(make_state(0.1, 0, 0, 0), 0.0).u, 0.0);
  EXPECT_LT(c(make_state(0, 0, 0, 0), 0.1).u, 0.0);
  EXPECT_EQ(c(make_state(0, 0, 0, 0), 0.0).u, 0.0);
}

TEST(RsHacTest, OutputBoundedAndOddSymmetric) {
  const RsHacController c(RsHacConfig::defaults());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const PlantState s(2.0 * d(rng), 10.0 * d(rng), 3.0 * d(rng), 30.0 * d(rng));
    const ControlOutput out = c(s, 0.0);
    EXPECT_LE(std::abs(out.u), kUMax);
    EXPECT_NEAR(out.weights.sum(), 1.0, 1e-12);
    EXPECT_EQ(c(-s, 0.0).u, -out.u);
  }
}

TEST(RsHacTest, RejectsInvalidConfig) {
  RsHacConfig cfg = RsHacConfig::defaults();
  cfg.l2 = 2.0;
  EXPECT_THROW(RsHacController{cfg}, std::invalid_argument);
  cfg = RsHacConfig::defaults();
  cfg.channels[kQ].control.n_labels = 7;
  EXPECT_THROW(RsHacController{cfg}, std::invalid_argument);
  EXPECT_THROW(RsHacController(RsHacConfig::defaults())(make_state(std::nan(""), 0, 0, 0), 0.0),
               std::invalid_argument);
}

TEST(FuzzyTest, SirmIsIdentity) {
  const FuzzyConfig cfg = FuzzyConfig::defaults();
  for (int k = 0; k <= 10000; ++k) {
    const double xs = k / 10000.0;
    EXPECT_NEAR(sirm_infer(xs, cfg), xs, 1e-12);
  }
}

TEST(FuzzyTest, StageTwoPassesSemanticInputsThrough) {
  const FuzzyController c(FuzzyConfig::defaults());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const PlantState s(0.5 * d(rng), 3.0 * d(rng), d(rng), 10.0 * d(rng));
    const ChannelVector in = c.semantic_inputs(s, 0.0);
    EXPECT_LT((c.semantic_outputs(s, 0.0) - in).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(c(-s, 0.0).u, -c(s, 0.0).u);
  }
}

TEST(FuzzyTest, SignRules) {
  const FuzzyController c(FuzzyConfig::defaults());
  EXPECT_GT(c(make_state(0, 0, 0.05, 0), 0.0).intermediates(kQ), 0.0);
  EXPECT_GT(c(make_state(0.1, 0, 0, 0), 0.0).u, 0.0);
  // Identity inference: u_x is the crisp image of the semantized error.
  EXPECT_NEAR(c(make_state(0.1, 0, 0, 0), 0.0).intermediates(kX), (0.1 / 0.86) * 2 * kUMax,
              1e-12);
}

TEST(FuzzyTest, TriangleAndValidation) {
  const Triangle t{0.0, 0.5, 1.0};
  EXPECT_EQ(t(0.5), 1.0);
  EXPECT_EQ(t(0.25), 0.5);
  EXPECT_EQ(t(1.5), 0.0);
  FuzzyConfig cfg = FuzzyConfig::defaults();
  cfg.memberships[1] = Triangle{0.1, 0.5, 0.9};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(DareTest, ScalarCase) {
  const Eigen::Matrix<double, 1, 1> a = Eigen::Matrix<double, 1, 1>::Constant(0.5);
  const Eigen::Matrix<double, 1, 1> one = Eigen::Matrix<double, 1, 1>::Constant(1.0);
  const auto sol = solve_dare<double, 1, 1>(a, one, one, one);
  // p = 0.25 p - 0.25 p^2 / (1 + p) + 1  <=>  p^2 - 0.25 p - 1 = 0.
  const double p = (0.25 + std::sqrt(0.0625 + 4.0)) / 2.0;
  EXPECT_NEAR(sol.P(0, 0), p, 1e-9);
  EXPECT_LT((dare_residual<double, 1, 1>(sol.P, a, one, one, one)), 1e-9);
  EXPECT_NEAR((dare_gain<double, 1, 1>(sol.P, a, one, one))(0, 0), 0.5 * p / (1 + p), 1e-9);
}

TEST(DareTest, ZeroDynamicsGiveQ) {
  const Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  const Eigen::Vector2d B(0.0, 1.0);
  const Eigen::Matrix2d Q = Eigen::Vector2d(3.0, 4.0).asDiagonal();
  const Eigen::Matrix<double, 1, 1> R = Eigen::Matrix<double, 1, 1>::Constant(1.0);
  const auto sol = solve_dare<double, 2, 1>(A, B, Q, R);
  EXPECT_LT((sol.P - Q).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DareTest, UnstabilizableThrows) {
  const Eigen::Matrix<double, 1, 1> a = Eigen::Matrix<double, 1, 1>::Constant(2.0);
  const Eigen::Matrix<double, 1, 1> zero = Eigen::Matrix<double, 1, 1>::Zero();
  const Eigen::Matrix<double, 1, 1> one = Eigen::Matrix<double, 1, 1>::Constant(1.0);
  EXPECT_THROW((solve_dare<double, 1, 1>(a, zero, one, one, 1e-10, 10000)), std::runtime_error);
}

Model plant_model() { return discretize(linearize(Params::measured()), 0.001); }

TEST(LqrTest, RiccatiGainIsStabilizingAndScaleInvariant) {
  const Model d = plant_model();
  LqrConfig cfg = LqrConfig::defaults();
  const LqrDesign base = lqr_gain(cfg, d);
  EXPECT_LT(base.residual, 1e-8);
  EXPECT_LT(closed_loop_pole_magnitudes(d, base.K)(0), 1.0);
  for (int i = 0; i < 4; ++i) EXPECT_LT(base.K(i), 0.0);

  cfg.Q *= 3.0;
  cfg.R *= 3.0;
  const LqrDesign scaled = lqr_gain(cfg, d);
  EXPECT_LT((scaled.K - base.K).cwiseAbs().maxCoeff(), 1e-6 * base.K.cwiseAbs().maxCoeff());
}

TEST(LqrTest, SpectralRadiusAgreesWithGelfandLimit) {
  const Model d = plant_model();
  const Eigen::RowVector4d K = LqrConfig::defaults().published_gain;
  Eigen::Matrix4d M = d.A - d.B * K;
  const int squarings = 14;
  for (int i = 0; i < squarings; ++i) M = M * M;
  const double gelfand = std::pow(M.norm(), 1.0 / std::pow(2.0, squarings));
  EXPECT_NEAR(closed_loop_pole_magnitudes(d, K)(0), gelfand, 2e-3);
  EXPECT_LT(gelfand, 1.0);
}

TEST(LqrTest, ControlLaw) {
  const Eigen::RowVector4d K = LqrConfig::defaults().published_gain;
  const ControlOutput out = lqr_control(make_state(0, 0, 0.01, 0), 0.0, K, -kUMax, kUMax);
  EXPECT_NEAR(out.u, 0.5616, 1e-12);
  EXPECT_NEAR(out.intermediates(kQ), 0.5616, 1e-12);
  EXPECT_GT(lqr_control(make_state(0.1, 0, 0, 0), 0.0, K, -kUMax, kUMax).u, 0.0);
  EXPECT_EQ(lqr_control(make_state(0, 0, 1.0, 0), 0.0, K, -kUMax, kUMax).u, kUMax);
  EXPECT_NEAR(lqr_control(make_state(0.3, 0, 0, 0), 0.2, K, -kUMax, kUMax).u, 1.395, 1e-12);
}

TEST(LqrTest, ControllerUsesConfiguredSource) {
  const Params p = Params::measured();
  LqrConfig cfg = LqrConfig::defaults();
  EXPECT_EQ(LqrController(cfg, p).gain(), cfg.published_gain);
  cfg.source = GainSource::kDare;
  EXPECT_EQ(LqrController(cfg, p).gain(), lqr_gain(cfg, plant_model()).K);
}

TEST(ControllerSuiteTest, NamesAndDispatch) {
  EXPECT_EQ(controller_name(ControllerKind::kFuzzy), "fc");
  EXPECT_EQ(parse_controller("lqr"), ControllerKind::kLqr);
  EXPECT_THROW(parse_controller("pid"), std::invalid_argument);
  const Params p = Params::measured();
  const ControllerSuite suite(RsHacConfig::defaults(), FuzzyConfig::defaults(),
                              LqrConfig::defaults(), p);
  const PlantState s = make_state(0.01, 0.02, 0.03, 0.04);
  EXPECT_EQ(suite.control(ControllerKind::kRsHac, s, 0.0).u,
            rshac_control(s, 0.0, RsHacConfig::defaults()).u);
  EXPECT_EQ(suite.control(ControllerKind::kFuzzy, s, 0.0).u,
            fuzzy_control(s, 0.0, FuzzyConfig::defaults()).u);
}

}  // namespace
}  // namespace rshac
