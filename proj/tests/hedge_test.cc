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


#include "rshac/hedge.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

namespace rshac {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;

// Closed-form value of label i (1-based) in an n-label frame.
double closed_form(int n, int i, double theta, double alpha) {
  const int median = (n - 1) / 2 + 1;
  if (i < median) return theta * (1.0 - std::pow(alpha, i));
  if (i > median) return theta * (1.0 + std::pow(alpha, n + 1 - i));
  return theta;
}

TEST(MsiTest, MedianIndex) {
  EXPECT_EQ(msi(7), 4);
  EXPECT_EQ(msi(5), 3);
  EXPECT_EQ(msi(1), 1);
  EXPECT_THROW(msi(4), std::invalid_argument);
  EXPECT_THROW(msi(0), std::invalid_argument);
  EXPECT_THROW(msi(-3), std::invalid_argument);
}

TEST(SqsmTest, SizeFrameAtOneHalf) {
  const Frame f = generate_sqsm(7, 0.5, 0.5);
  EXPECT_THAT(f.values(), Pointwise(DoubleNear(1e-15),
                                    std::vector<double>{0.25, 0.375, 0.4375, 0.5, 0.5625, 0.625,
                                                        0.75}));
  EXPECT_EQ(f.n_labels(), 7);
  EXPECT_EQ(f.theta(), 0.5);
  EXPECT_EQ(f.alpha(), 0.5);
}

TEST(SqsmTest, SymbolicPattern) {
  const double theta = 0.43;
  const double alpha = 0.61;
  const Frame f = generate_sqsm(7, theta, alpha);
  const std::vector<double> want{
      theta * (1 - alpha),
      theta * (1 - alpha * alpha),
      theta * (1 - alpha * alpha * alpha),
      theta,
      theta * (1 + alpha * alpha * alpha),
      theta * (1 + alpha * alpha),
      theta * (1 + alpha),
  };
  EXPECT_THAT(f.values(), Pointwise(DoubleNear(1e-15), want));
}

TEST(SqsmTest, SingleLabelIsNeutral) {
  EXPECT_THAT(generate_sqsm(1, 0.3, 0.5).values(), ElementsAre(0.3));
}

TEST(SqsmTest, RandomizedInvariants) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> half(0, 12);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 * half(rng) + 1;
    const double theta = unit(rng);
    const double alpha = unit(rng);
    const Frame f = generate_sqsm(n, theta, alpha);
    ASSERT_EQ(f.n_labels(), n);
    for (int i = 1; i <= n; ++i) {
      const double v = f.value(i - 1);
      EXPECT_NEAR(v, closed_form(n, i, theta, alpha), 1e-14);
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 2.0 * theta);
      EXPECT_NEAR(v + f.value(n - i), 2.0 * theta, 1e-14);
      if (i > 1) EXPECT_GT(v, f.value(i - 2));
    }
  }
}

TEST(SqsmTest, RejectsBadArguments) {
  EXPECT_THROW(generate_sqsm(6, 0.5, 0.5), std::invalid_argument);
  EXPECT_THROW(generate_sqsm(7, 0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(generate_sqsm(7, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(generate_sqsm(7, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(generate_sqsm(7, 0.5, 1.2), std::invalid_argument);
}

TEST(SieTest, SizeLabels) {
  const Frame f = generate_sqsm(7, 0.5, 0.5).with_labels(size_labels());
  EXPECT_EQ(sie("very small", f), 1);
  EXPECT_EQ(sie("neutral", f), 4);
  EXPECT_EQ(sie("very big", f), 7);
  EXPECT_THROW(sie("huge", f), std::invalid_argument);
  EXPECT_THROW(generate_sqsm(5, 0.5, 0.5).with_labels(size_labels()), std::invalid_argument);
}

TEST(SqmReferenceTest, ClosedForms) {
  EXPECT_THAT(sqm_size_reference(0.5, 0.5),
              Pointwise(DoubleNear(1e-15), std::vector<double>{0.125, 0.25, 0.375, 0.5, 0.625,
                                                               0.75, 0.875}));
  const double theta = 0.4;
  const double alpha = 0.3;
  const auto v = sqm_size_reference(theta, alpha);
  EXPECT_NEAR(v[0], theta * (1 - alpha) * (1 - alpha), 1e-15);
  EXPECT_EQ(v[3], generate_sqsm(7, theta, alpha).value(3));
}

TEST(LinearMapTest, AffineAndClamped) {
  const Map m = Map::linear(-0.43, 0.43);
  EXPECT_NEAR(semantize(m, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(semantize(m, 0.43), 1.0, 1e-15);
  EXPECT_NEAR(semantize(m, -0.215), 0.25, 1e-15);
  EXPECT_EQ(semantize(m, 5.0), 1.0);
  EXPECT_EQ(semantize(m, -5.0), 0.0);
  EXPECT_TRUE(m.is_centered());
  EXPECT_FALSE(Map::linear(-1.0, 2.0).is_centered());
}

TEST(LinearMapTest, ControlDesemantization) {
  const Map u = Map::linear(-29.42, 29.42);
  EXPECT_NEAR(desemantize(u, 1.0), 29.42, 1e-12);
  EXPECT_NEAR(desemantize(u, 0.0), -29.42, 1e-12);
  EXPECT_NEAR(desemantize(u, 0.5), 0.0, 1e-12);
  EXPECT_THROW(desemantize(u, 1.5), std::domain_error);
  EXPECT_THROW(Map::linear(1.0, 1.0), std::invalid_argument);
}

TEST(SigmoidMapTest, Properties) {
  const Map m = Map::sigmoid(8.0);
  EXPECT_EQ(semantize(m, 0.0), 0.5);
  EXPECT_GT(semantize(m, 4.0), 1.0 - 1e-13);
  EXPECT_LE(semantize(m, 1e3), 1.0);
  EXPECT_LT(semantize(m, -10.0), 1e-30);
  double prev = 0.0;
  for (double x = -2.0; x <= 2.0; x += 0.01) {
    const double s = semantize(m, x);
    EXPECT_GT(s, prev);
    EXPECT_NEAR(semantize(m, -x), 1.0 - s, 1e-15);
    const double h = 1e-6;
    const double fd = (semantize(m, x + h) - semantize(m, x - h)) / (2 * h);
    EXPECT_NEAR(fd, 8.0 * s * (1.0 - s), 1e-6 * std::max(8.0 * s * (1.0 - s), 1e-3));
    prev = s;
  }
  EXPECT_THROW(Map::sigmoid(0.0), std::invalid_argument);
  EXPECT_THROW(Map::sigmoid(-1.0), std::invalid_argument);
}

TEST(SigmoidMapTest, InverseHasPositiveSignAboveOneHalf) {
  const Map m = Map::sigmoid(0.45, 0.2);
  const double xs = 0.9;
  EXPECT_NEAR(desemantize(m, xs), 0.2 + std::log(9.0) / 0.45, 1e-12);
  EXPECT_GT(desemantize(m, xs), 0.2);
  EXPECT_THROW(desemantize(m, 0.0), std::domain_error);
  EXPECT_THROW(desemantize(m, 1.0), std::domain_error);
}

TEST(SemanticMapTest, RoundTrips) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Map lin = Map::linear(-2.0, 2.0);
  const Map sig = Map::sigmoid(0.45);
  for (int k = 0; k < 1000; ++k) {
    const double x = 1.999 * u(rng);
    EXPECT_NEAR(desemantize(lin, semantize(lin, x)), x, 1e-9);
    const double y = 30.0 * u(rng);
    EXPECT_NEAR(desemantize(sig, semantize(sig, y)), y, 1e-9);
  }
}

TEST(InferenceLineTest, PairsLabelsInOrder) {
  const Line line = build_inference_line(generate_sqsm(7, 0.5, 0.5), generate_sqsm(7, 0.5, 0.35));
  ASSERT_EQ(line.size(), 7u);
  EXPECT_NEAR(line.knots().front().first, 0.25, 1e-15);
  EXPECT_NEAR(line.knots().back().first, 0.75, 1e-15);
  EXPECT_NEAR(line.knots().front().second, 0.5 * (1 - 0.35), 1e-15);
  EXPECT_TRUE(line.is_symmetric());
  EXPECT_NEAR(infer(line, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(infer(line, 0.0), 0.5 * 0.65, 1e-15);
  EXPECT_NEAR(infer(line, 1.0), 0.5 * 1.35, 1e-15);
  // Midway between the first two knots.
  const double x = (0.25 + 0.375) / 2;
  const double want = (0.5 * (1 - 0.35) + 0.5 * (1 - 0.35 * 0.35)) / 2;
  EXPECT_NEAR(infer(line, x), want, 1e-15);
}

TEST(InferenceLineTest, AnchoredEnds) {
  const Line line =
      build_inference_line(generate_sqsm(5, 0.5, 0.5), generate_sqsm(5, 0.5, 0.8), true);
  ASSERT_EQ(line.size(), 7u);
  EXPECT_EQ(infer(line, 0.0), 0.0);
  EXPECT_EQ(infer(line, 1.0), 1.0);
  EXPECT_NEAR(infer(line, 0.125), 0.5 * (1 - 0.8) / 2, 1e-15);
}

TEST(InferenceLineTest, RejectsMismatchedFrames) {
  EXPECT_THROW(build_inference_line(generate_sqsm(5, 0.5, 0.5), generate_sqsm(7, 0.5, 0.5)),
               std::invalid_argument);
  EXPECT_THROW(Line({{0.5, 0.0}, {0.5, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Line({{0.1, 0.6}, {0.5, 0.2}}), std::invalid_argument);
  EXPECT_THROW(infer(Line{}, 0.5), std::invalid_argument);
}

}  // namespace
}  // namespace rshac
