// Copyright 2026 The gpriv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gpriv/accuracy.h"

#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "gpriv/random.h"
#include "testing/test_util.h"

namespace gpriv {
namespace {

using ::gpriv::testing::ExampleProblem;
using ::gpriv::testing::MakeBox;
using ::gpriv::testing::StatusIs;
using ::gpriv::testing::Univariate;
using ::gpriv::testing::ValueOrDie;
using ::gpriv::testing::Vec;

using Points = std::vector<Eigen::VectorXd>;

const Box& X0() {
  static const Box* box = new Box(MakeBox({-10.0}, {10.0}));
  return *box;
}

TEST(DeltaStarTest, KnownValues) {
  EXPECT_EQ(DeltaStar(Vec({0.52}), X0()), 5.2);
  EXPECT_EQ(DeltaStar(Vec({0.0}), X0()), 0.0);
  EXPECT_EQ(DeltaStar(Vec({1.0, -1.0}), MakeBox({0, 0}, {1, 1})), 1.0);
}

TEST(AdmissibleSlopeTest, LiteralTest) {
  EXPECT_FALSE(AdmissibleSlope(Vec({0.52}), DeltaStar(Vec({0.52}), X0()), X0()));
  EXPECT_TRUE(AdmissibleSlope(Vec({0.0}), 0.0, X0()));
  EXPECT_FALSE(AdmissibleSlope(Vec({1e9}), 5.2, X0()));
  // On a box anchored at zero the one-sided form is attained.
  const Box pos = MakeBox({0.0}, {10.0});
  EXPECT_TRUE(AdmissibleSlope(Vec({0.52}), DeltaStar(Vec({0.52}), pos), pos));
}

TEST(UpperBoundTest, KnownValues) {
  const Points mixed = {Vec({0.5}), Vec({-0.2})};
  EXPECT_NEAR(ValueOrDie(UpperBound(mixed, X0())), 0.0, 1e-12);
  const Points positive = {Vec({0.5}), Vec({0.7}), Vec({0.1})};
  EXPECT_NEAR(ValueOrDie(UpperBound(positive, X0())), 20.0, 1e-9);
  const Points zeros = {Vec({0.0}), Vec({0.0})};
  EXPECT_NEAR(ValueOrDie(UpperBound(zeros, X0())), Diameter(X0()), 1e-9);
  const Box b2 = MakeBox({0.0, -1.0}, {2.0, 5.0});
  const Points zero2 = {Vec({0.0, 0.0})};
  EXPECT_NEAR(ValueOrDie(UpperBound(zero2, b2)), 6.0, 1e-9);
}

TEST(UpperBoundTest, Errors) {
  EXPECT_THAT(UpperBound(Points{}, X0()),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(UpperBound(Points{Vec({1.0, 2.0})}, X0()),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(SignCorrectedUpperBoundTest, UsesSummedSlope) {
  const Points mixed = {Vec({0.5}), Vec({-0.2})};
  EXPECT_NEAR(ValueOrDie(SignCorrectedUpperBound(mixed, X0())), 20.0, 1e-9);
  const Points cancel = {Vec({0.5}), Vec({-0.5})};
  EXPECT_NEAR(ValueOrDie(SignCorrectedUpperBound(cancel, X0())), 20.0, 1e-9);
}

// Grid lower bound for max ||d||_inf over d in [-w, w]^2 with rows m.d <= 0.
double GridSeparation(const Points& rows, const Eigen::Vector2d& w) {
  double best = 0.0;
  const int k = 400;
  for (int p = 0; p <= k; ++p) {
    for (int q = 0; q <= k; ++q) {
      const Eigen::Vector2d d(-w[0] + 2 * w[0] * p / k, -w[1] + 2 * w[1] * q / k);
      bool ok = true;
      for (const Eigen::VectorXd& m : rows) ok = ok && m.dot(d) <= 0.0;
      if (ok) best = std::max(best, d.cwiseAbs().maxCoeff());
    }
  }
  return best;
}

TEST(UpperBoundProperty, TwoDimensionalGridOracle) {
  Rng rng(10);
  const Box box = MakeBox({-1.0, 0.0}, {2.0, 2.0});
  for (int t = 0; t < 20; ++t) {
    Points rows;
    const int count = 1 + static_cast<int>(rng.Uniform(0, 3));
    for (int r = 0; r < count; ++r) {
      rows.push_back(Vec({rng.Uniform(-1, 1), rng.Uniform(-1, 1)}));
    }
    const double ub = ValueOrDie(UpperBound(rows, box));
    const double grid = GridSeparation(rows, box.Widths());
    EXPECT_GE(ub, grid - 1e-9);
    EXPECT_LE(ub, grid + 0.05 * Diameter(box));
  }
}

TEST(UpperBoundProperty, MonotoneAndBoundedByDiameter) {
  Rng rng(3);
  const Box box = MakeBox({-1.0, -3.0}, {4.0, 1.0});
  for (int t = 0; t < 50; ++t) {
    Points rows;
    double prev = ValueOrDie(UpperBound(Points{Vec({0.0, 0.0})}, box));
    EXPECT_LE(prev, Diameter(box) + 1e-9);
    for (int r = 0; r < 4; ++r) {
      rows.push_back(Vec({rng.Normal(0, 1), rng.Normal(0, 1)}));
      const double ub = ValueOrDie(UpperBound(rows, box));
      EXPECT_LE(ub, prev + 1e-9);
      EXPECT_GE(ub, -1e-12);
      prev = ub;
    }
  }
}

TEST(EmpiricalErrorTest, Definition) {
  EXPECT_EQ(ValueOrDie(EmpiricalError(Points{Vec({1.5})}, Points{Vec({1.5})})),
            0.0);
  EXPECT_NEAR(ValueOrDie(EmpiricalError(Points{Vec({2.62})}, Points{Vec({2.60})})),
              0.02, 1e-12);
  EXPECT_EQ(ValueOrDie(EmpiricalError(Points{Vec({0.0}), Vec({1.0})},
                                      Points{Vec({-1.0}), Vec({0.5})})),
            2.0);
  EXPECT_EQ(ValueOrDie(EmpiricalError(Points{Vec({0.0, 0.0})},
                                      Points{Vec({0.5, -3.0})})),
            3.0);
  EXPECT_THAT(EmpiricalError(Points{}, Points{Vec({0.0})}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(EmpiricalError(Points{Vec({0.0})}, Points{Vec({0.0, 1.0})}),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(NecessaryConditionTest, MaxOverPairs) {
  const Points slopes = {Vec({0.5}), Vec({0.25})};
  EXPECT_DOUBLE_EQ(ValueOrDie(NecessaryConditionValue(
                       slopes, Points{Vec({1.0})}, Points{Vec({0.0}), Vec({2.0})})),
                   0.75);
  EXPECT_DOUBLE_EQ(ValueOrDie(NecessaryConditionValue(
                       slopes, Points{Vec({0.0})}, Points{Vec({1.0})})),
                   -0.75);
  EXPECT_THAT(NecessaryConditionValue(Points{}, Points{Vec({0.0})},
                                      Points{Vec({0.0})}),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(CertifyMinimizersTest, ExampleSum) {
  const Points xs = ValueOrDie(CertifyReferenceOptimizers(ExampleProblem()));
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_NEAR(xs[0][0], 2.62, 1e-2);
  const Points coarse =
      ValueOrDie(CertifyReferenceOptimizers(ExampleProblem(), 1001));
  ASSERT_EQ(coarse.size(), 1u);
  EXPECT_NEAR(coarse[0][0], xs[0][0], 1e-5);
}

TEST(CertifyMinimizersTest, ConvexQuadratic) {
  const ObjectiveSpec s =
      ValueOrDie(PolyToSpec(Univariate({1, -2, 1}), MakeBox({-5.0}, {5.0})));
  const Points xs = ValueOrDie(CertifyMinimizers(s));
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_NEAR(xs[0][0], 1.0, 1e-5);
}

TEST(CertifyMinimizersTest, DoubleWellReportsBoth) {
  const ObjectiveSpec s =
      ValueOrDie(PolyToSpec(Univariate({0, 0, -1, 0, 1}), MakeBox({-2.0}, {2.0})));
  Points xs = ValueOrDie(CertifyMinimizers(s));
  ASSERT_EQ(xs.size(), 2u);
  std::sort(xs.begin(), xs.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  EXPECT_NEAR(xs[0][0], -1 / std::sqrt(2.0), 1e-5);
  EXPECT_NEAR(xs[1][0], 1 / std::sqrt(2.0), 1e-5);
}

TEST(CertifyMinimizersTest, BoundaryMinimum) {
  const ObjectiveSpec s =
      ValueOrDie(PolyToSpec(Univariate({0, 1}), MakeBox({-3.0}, {4.0})));
  const Points xs = ValueOrDie(CertifyMinimizers(s));
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_EQ(xs[0][0], -3.0);
}

TEST(CertifyMinimizersTest, TwoDimensional) {
  // (x - 0.3)^2 + (y + 0.2)^2
  const Polynomial p = ValueOrDie(Polynomial::Create(
      2, {{1, {2, 0}}, {-0.6, {1, 0}}, {1, {0, 2}}, {0.4, {0, 1}}, {0.13, {0, 0}}}));
  const Points xs = ValueOrDie(CertifyMinimizers(
      ValueOrDie(PolyToSpec(p, MakeBox({-1.0, -1.0}, {1.0, 1.0}))), 201));
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_NEAR(xs[0][0], 0.3, 1e-4);
  EXPECT_NEAR(xs[0][1], -0.2, 1e-4);
}

TEST(CertifyMinimizersTest, Errors) {
  const ObjectiveSpec s3 = ValueOrDie(
      PolyToSpec(Polynomial::Zero(3), MakeBox({0, 0, 0}, {1, 1, 1})));
  EXPECT_THAT(CertifyMinimizers(s3),
              StatusIs(absl::StatusCode::kResourceExhausted));
  const ObjectiveSpec s1 =
      ValueOrDie(PolyToSpec(Univariate({0, 1}), MakeBox({0.0}, {1.0})));
  EXPECT_THAT(CertifyMinimizers(s1, 2),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(AccuracyReportTest, ReferenceSlopes) {
  const Points slopes = {Vec({0.52}), Vec({0.73}), Vec({0.38})};
  const AccuracyReport r = ValueOrDie(ComputeAccuracyReport(slopes, X0()));
  EXPECT_THAT(r.delta_star, ::testing::ElementsAre(5.2, 7.3, 3.8));
  EXPECT_THAT(r.admissible, ::testing::ElementsAre(false, false, false));
  EXPECT_NEAR(r.ub, 20.0, 1e-9);
  const auto j = AccuracyReportToJson(r);
  EXPECT_EQ(j.at("ub").get<double>(), r.ub);
  EXPECT_FALSE(j.contains("empirical_error"));
}

}  // namespace
}  // namespace gpriv
