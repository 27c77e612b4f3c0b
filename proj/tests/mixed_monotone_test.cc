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

#include "gpriv/mixed_monotone.h"

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

ObjectiveSpec Square() {
  return ValueOrDie(PolyToSpec(Univariate({0, 0, 1}), MakeBox({0.0}, {2.0})));
}

ObjectiveSpec WithBounds(const ObjectiveSpec& s, Eigen::VectorXd lo,
                         Eigen::VectorXd hi) {
  return ValueOrDie(WithJacobianBounds(s, {std::move(lo), std::move(hi)}));
}

JssDecomposition Decompose(const ObjectiveSpec& s, bool upper) {
  const auto vs = ValueOrDie(EnumerateVertices(s));
  for (const SlopeVertex& v : vs) {
    if (v.upper[0] == upper) return ValueOrDie(JssDecomposition::Create(s, v));
  }
  return ValueOrDie(JssDecomposition::Create(s, vs.front()));
}

TEST(EnumerateVerticesTest, OneDimensional) {
  const ObjectiveSpec s = WithBounds(Square(), Vec({-2.0}), Vec({4.0}));
  const auto vs = ValueOrDie(EnumerateVertices(s));
  ASSERT_EQ(vs.size(), 2u);
  EXPECT_EQ(vs[0].slope, Vec({-2.0}));
  EXPECT_EQ(vs[1].slope, Vec({4.0}));
}

TEST(EnumerateVerticesTest, HypercubeAndDegenerate) {
  const ObjectiveSpec q = ValueOrDie(
      PolyToSpec(Polynomial::Zero(2), MakeBox({0.0, 0.0}, {1.0, 1.0})));
  EXPECT_EQ(ValueOrDie(EnumerateVertices(
                           WithBounds(q, Vec({0.0, 0.0}), Vec({1.0, 1.0}))))
                .size(),
            4u);
  const auto one = ValueOrDie(EnumerateVertices(
      WithBounds(Square(), Vec({3.0}), Vec({3.0}))));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].slope, Vec({3.0}));
}

TEST(EnumerateVerticesTest, CapIsEnforced) {
  const ObjectiveSpec q = ValueOrDie(
      PolyToSpec(Polynomial::Zero(3), MakeBox({0, 0, 0}, {1, 1, 1})));
  EXPECT_THAT(EnumerateVertices(q, 2),
              StatusIs(absl::StatusCode::kResourceExhausted));
}

TEST(JssDecompositionTest, SelectorFollowsVertex) {
  const JssDecomposition lo = Decompose(Square(), false);
  EXPECT_EQ(lo.slope(), Vec({0.0}));
  EXPECT_THAT(lo.selector(), ::testing::ElementsAre(true));
  EXPECT_EQ(lo.Remainder(Vec({1.5})), 2.25);

  const JssDecomposition hi = Decompose(Square(), true);
  EXPECT_EQ(hi.slope(), Vec({4.0}));
  EXPECT_THAT(hi.selector(), ::testing::ElementsAre(false));
  for (double x = 0; x < 2; x += 0.1) {
    EXPECT_GE(hi.Remainder(Vec({x})), hi.Remainder(Vec({x + 0.1})));
  }
}

TEST(JssDecompositionTest, RejectsForeignVertex) {
  EXPECT_THAT(JssDecomposition::Create(Square(), {Vec({1.0}), {false}}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(JssDecomposition::Create(Square(), {Vec({0.0, 0.0}), {false}}),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(JssDecompositionTest, ExampleUpperVertexRemainderIsNonincreasing) {
  const ObjectiveSpec f1 = ExampleProblem().objective(0);
  const JssDecomposition d = Decompose(f1, true);
  for (int k = 0; k < 1000; ++k) {
    const double x = -10.0 + 20.0 * k / 999.0;
    const double deriv = 4 * x * x * x + 6 * x * x - 32 * x - 32;
    EXPECT_LE(deriv - d.slope()[0], 0.0);
  }
}

TEST(DecompositionValueTest, DegenerateAndOrdering) {
  const JssDecomposition d = Decompose(ExampleProblem().objective(0), true);
  EXPECT_EQ(ValueOrDie(d.DecompositionValue(Vec({0.3}), Vec({0.3}))),
            d.Remainder(Vec({0.3})));
  EXPECT_EQ(ValueOrDie(d.DecompositionValue(Vec({-1.0}), Vec({1.0}))),
            d.Remainder(Vec({1.0})));
  EXPECT_EQ(ValueOrDie(d.DecompositionValue(Vec({1.0}), Vec({-1.0}))),
            d.Remainder(Vec({-1.0})));
  const double lo = ValueOrDie(d.DecompositionValue(Vec({-1.0}), Vec({1.0})));
  const double hi = ValueOrDie(d.DecompositionValue(Vec({1.0}), Vec({-1.0})));
  for (int k = 0; k < 1000; ++k) {
    const double h = d.Remainder(Vec({-1.0 + 2.0 * k / 999.0}));
    EXPECT_LE(lo, h);
    EXPECT_GE(hi, h);
  }
}

TEST(DecompositionValueTest, UnorderedPairIsRejected) {
  const ObjectiveSpec q = ValueOrDie(
      PolyToSpec(Polynomial::Zero(2), MakeBox({0.0, 0.0}, {1.0, 1.0})));
  const JssDecomposition d = ValueOrDie(
      JssDecomposition::Create(q, ValueOrDie(EnumerateVertices(q)).front()));
  EXPECT_THAT(d.DecompositionValue(Vec({0.0, 1.0}), Vec({1.0, 0.0})),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(d.DecompositionValue(Vec({0.0}), Vec({1.0})),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(ExtremaTest, ConstantRemainder) {
  const ObjectiveSpec s = ValueOrDie(
      PolyToSpec(Univariate({1.0, 2.0}), MakeBox({-1.0}, {1.0})));
  const JssDecomposition d = Decompose(s, false);
  const RemainderExtrema e = ValueOrDie(d.Extrema(s.domain()));
  EXPECT_EQ(e.min, e.max);
  EXPECT_EQ(e.width(), 0.0);
}

TEST(ExtremaTest, SquareAtLowerVertex) {
  const JssDecomposition d = Decompose(Square(), false);
  const RemainderExtrema e = ValueOrDie(d.Extrema(MakeBox({0.0}, {2.0})));
  EXPECT_EQ(e.min, 0.0);
  EXPECT_EQ(e.max, 4.0);
  EXPECT_THAT(d.Extrema(MakeBox({-1.0}, {2.0})),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(ExtremaTest, TightAgainstGridAtEveryExampleVertex) {
  const AgentProblem p = ExampleProblem();
  for (const ObjectiveSpec& s : p.objectives()) {
    for (const SlopeVertex& v : ValueOrDie(EnumerateVertices(s))) {
      const JssDecomposition d = ValueOrDie(JssDecomposition::Create(s, v));
      const RemainderExtrema e = ValueOrDie(d.Extrema(s.domain()));
      const auto [mn, mx] = testing::GridRange(
          [&](double x) { return d.Remainder(Vec({x})); }, -10, 10, 100000);
      EXPECT_LE(std::abs(e.min - mn), 1e-6 * (1 + std::abs(mn)));
      EXPECT_LE(std::abs(e.max - mx), 1e-6 * (1 + std::abs(mx)));
    }
  }
}

TEST(InclusionTest, SingletonAndSquare) {
  const JssDecomposition d = Decompose(Square(), false);
  const Interval point =
      ValueOrDie(d.Inclusion(Box::Singleton(Vec({1.5})), Vec({0.25})));
  EXPECT_DOUBLE_EQ(point.lo, 2.25 + 0.375);
  EXPECT_DOUBLE_EQ(point.hi, 2.25 + 0.375);
  EXPECT_EQ(ValueOrDie(d.RangeWidth(Box::Singleton(Vec({1.5})), Vec({0.25}))),
            0.0);
  const Interval full = ValueOrDie(d.Inclusion(MakeBox({0.0}, {2.0}), {}));
  EXPECT_EQ(full, (Interval{0.0, 4.0}));
}

TEST(RangeWidthTest, DirectFormula) {
  // Remainder width 4 (x^2 at slope 0 on [0, 2]); |m + extra| = 1; width 2.
  const JssDecomposition d = Decompose(Square(), false);
  EXPECT_DOUBLE_EQ(ValueOrDie(d.RangeWidth(MakeBox({0.0}, {2.0}), Vec({1.0}))),
                   6.0);
  EXPECT_DOUBLE_EQ(ValueOrDie(d.RangeWidth(MakeBox({0.0}, {2.0}), Vec({-1.0}))),
                   6.0);
}

TEST(InclusionTest, ExampleContainsGridAndWidthAgrees) {
  const AgentProblem p = ExampleProblem();
  const ObjectiveSpec& f1 = p.objective(0);
  for (const SlopeVertex& v : ValueOrDie(EnumerateVertices(f1))) {
    const JssDecomposition d = ValueOrDie(JssDecomposition::Create(f1, v));
    const Interval r = ValueOrDie(d.Inclusion(f1.domain(), Vec({0.52})));
    for (int k = 0; k < 10000; ++k) {
      const double x = -10.0 + 20.0 * k / 9999.0;
      const double g = testing::F1(x) + 0.52 * x;
      EXPECT_LE(r.lo, g);
      EXPECT_GE(r.hi, g);
    }
    const double w = ValueOrDie(d.RangeWidth(f1.domain(), Vec({0.52})));
    EXPECT_NEAR(w, r.Width(), 1e-12 * w);
  }
}

TEST(InclusionProperty, SoundOnRandomBoxes) {
  const AgentProblem p = ExampleProblem();
  Rng rng(17);
  for (const ObjectiveSpec& s : p.objectives()) {
    for (const SlopeVertex& v : ValueOrDie(EnumerateVertices(s))) {
      const JssDecomposition d = ValueOrDie(JssDecomposition::Create(s, v));
      for (const Box& b : SampleSubintervals(s.domain(), 20, rng.NextU64())) {
        const double extra = rng.Uniform(-2, 2);
        const Interval r = ValueOrDie(d.Inclusion(b, Vec({extra})));
        for (int k = 0; k < 2000; ++k) {
          const Eigen::VectorXd x = Vec({rng.Uniform(b.lo()[0], b.hi()[0])});
          const double g = s.Evaluate(x) + extra * x[0];
          const double slack = 1e-12 * (1.0 + std::abs(g));
          ASSERT_TRUE(r.lo - slack <= g && g <= r.hi + slack) << x[0];
        }
      }
    }
  }
}

TEST(InclusionProperty, DecompositionIdentity) {
  const AgentProblem p = ExampleProblem();
  Rng rng(4);
  for (const ObjectiveSpec& s : p.objectives()) {
    for (const SlopeVertex& v : ValueOrDie(EnumerateVertices(s))) {
      const JssDecomposition d = ValueOrDie(JssDecomposition::Create(s, v));
      for (int k = 0; k < 1000; ++k) {
        const Eigen::VectorXd x = Vec({rng.Uniform(-10, 10)});
        const double f = s.Evaluate(x);
        EXPECT_NEAR(d.Remainder(x) + v.slope.dot(x), f,
                    1e-10 * (1 + std::abs(f)));
      }
    }
  }
}

TEST(InclusionProperty, MonotoneUnderNesting) {
  const AgentProblem p = ExampleProblem();
  Rng rng(8);
  for (const ObjectiveSpec& s : p.objectives()) {
    const JssDecomposition d = ValueOrDie(
        JssDecomposition::Create(s, ValueOrDie(EnumerateVertices(s)).back()));
    for (int t = 0; t < 200; ++t) {
      double a = rng.Uniform(-10, 10), b = rng.Uniform(-10, 10);
      if (a > b) std::swap(a, b);
      const double c = rng.Uniform(a, b), e = rng.Uniform(c, b);
      const double extra = rng.Uniform(-1, 1);
      const Interval outer = ValueOrDie(d.Inclusion(MakeBox({a}, {b}), Vec({extra})));
      const Interval inner = ValueOrDie(d.Inclusion(MakeBox({c}, {e}), Vec({extra})));
      EXPECT_TRUE(outer.Contains(inner));
    }
  }
}

TEST(InclusionProperty, TwoDimensionalSoundness) {
  // x^2 y - y^3 + x y on [-1, 2] x [-1, 1].
  const Polynomial p = ValueOrDie(
      Polynomial::Create(2, {{1.0, {2, 1}}, {-1.0, {0, 3}}, {1.0, {1, 1}}}));
  const Box box = MakeBox({-1.0, -1.0}, {2.0, 1.0});
  const ObjectiveSpec s = ValueOrDie(PolyToSpec(p, box));
  Rng rng(12);
  for (const SlopeVertex& v : ValueOrDie(EnumerateVertices(s))) {
    const JssDecomposition d = ValueOrDie(JssDecomposition::Create(s, v));
    for (const Box& b : SampleSubintervals(box, 10, rng.NextU64())) {
      const Eigen::VectorXd extra = Vec({rng.Uniform(-1, 1), rng.Uniform(-1, 1)});
      const Interval r = ValueOrDie(d.Inclusion(b, extra));
      for (int k = 0; k < 1000; ++k) {
        Eigen::VectorXd x(2);
        for (int j = 0; j < 2; ++j) x[j] = rng.Uniform(b.lo()[j], b.hi()[j]);
        const double g = s.Evaluate(x) + extra.dot(x);
        const double slack = 1e-12 * (1.0 + std::abs(g));
        ASSERT_TRUE(r.lo - slack <= g && g <= r.hi + slack);
      }
    }
  }
}

}  // namespace
}  // namespace gpriv
