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

#include "gpriv/dist_opt.h"

#include <cmath>
#include <sstream>
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

AgentProblem Quadratics(const std::vector<double>& centers) {
  const Box x0 = MakeBox({-10.0}, {10.0});
  std::vector<ObjectiveSpec> specs;
  for (double c : centers) {
    specs.push_back(ValueOrDie(PolyToSpec(Univariate({c * c, -2 * c, 1}), x0)));
  }
  return ValueOrDie(AgentProblem::Create(std::move(specs)));
}

TEST(MetropolisTest, CompleteGraph) {
  const NetworkGraph g = ValueOrDie(MetropolisWeights(CompleteGraphEdges(3), 3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(g.mixing(i, j), 1.0 / 3);
  }
}

TEST(MetropolisTest, PathGraph) {
  const NetworkGraph g = ValueOrDie(MetropolisWeights(PathGraphEdges(3), 3));
  Eigen::Matrix3d expected;
  expected << 2.0 / 3, 1.0 / 3, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 1.0 / 3, 2.0 / 3;
  EXPECT_TRUE(g.mixing.isApprox(expected, 1e-15));
}

TEST(MetropolisTest, SingleNode) {
  const NetworkGraph g = ValueOrDie(MetropolisWeights({}, 1));
  EXPECT_EQ(g.mixing(0, 0), 1.0);
}

TEST(MetropolisTest, Errors) {
  const std::vector<Edge> disconnected = {{0, 1}};
  EXPECT_THAT(MetropolisWeights(disconnected, 3),
              StatusIs(absl::StatusCode::kInvalidArgument));
  const std::vector<Edge> loop = {{0, 0}, {0, 1}};
  EXPECT_THAT(MetropolisWeights(loop, 2),
              StatusIs(absl::StatusCode::kInvalidArgument));
  const std::vector<Edge> outside = {{0, 5}};
  EXPECT_THAT(MetropolisWeights(outside, 2),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(MetropolisWeights({}, 0),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(MetropolisProperty, DoublyStochasticOnRandomGraphs) {
  Rng rng(77);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng.Uniform(0, 7));
    std::vector<Edge> edges = PathGraphEdges(n);
    for (int e = 0; e < n; ++e) {
      const int a = static_cast<int>(rng.Uniform(0, n));
      const int b = static_cast<int>(rng.Uniform(0, n));
      if (a != b) edges.push_back({a, b});
    }
    const NetworkGraph g = ValueOrDie(MetropolisWeights(edges, n));
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(g.mixing.row(i).sum(), 1.0, 1e-10);
      EXPECT_NEAR(g.mixing.col(i).sum(), 1.0, 1e-10);
      for (int j = 0; j < n; ++j) {
        EXPECT_GE(g.mixing(i, j), 0.0);
        EXPECT_EQ(g.mixing(i, j), g.mixing(j, i));
      }
    }
  }
}

TEST(AlgorithmNamesTest, RoundTrip) {
  for (Algorithm a : {Algorithm::kDgd, Algorithm::kGradientTracking,
                      Algorithm::kZerothOrder}) {
    EXPECT_EQ(ValueOrDie(ParseAlgorithm(AlgorithmName(a))), a);
  }
  EXPECT_EQ(ValueOrDie(ParseAlgorithm("gradient_tracking")),
            Algorithm::kGradientTracking);
  EXPECT_THAT(ParseAlgorithm("adam"), StatusIs(absl::StatusCode::kInvalidArgument));
}

class QuadraticConsensusTest : public ::testing::TestWithParam<Algorithm> {};

TEST_P(QuadraticConsensusTest, ReachesMeanOfCenters) {
  const AgentProblem p = Quadratics({1.0, 2.0, 6.0});
  const NetworkGraph g = ValueOrDie(MetropolisWeights(CompleteGraphEdges(3), 3));
  AlgorithmConfig cfg;
  cfg.kind = GetParam();
  cfg.max_rounds = 10000;
  cfg.step_a = 2.0;
  cfg.seed = 5;
  const Points x0(3, Vec({-7.0}));
  const Trace t = ValueOrDie(RunDistributed(p, {}, g, cfg, x0));
  EXPECT_NEAR(t.consensus[0], 3.0, 1e-3);
  EXPECT_LE(t.rounds, 10000);
}

INSTANTIATE_TEST_SUITE_P(All, QuadraticConsensusTest,
                         ::testing::Values(Algorithm::kDgd,
                                           Algorithm::kGradientTracking,
                                           Algorithm::kZerothOrder),
                         [](const auto& info) {
                           return std::string(AlgorithmName(info.param));
                         });

TEST(RunDistributedTest, SingleAgentIsProjectedGradientDescent) {
  const AgentProblem p =
      testing::SingleAgent(Univariate({0, 3}), MakeBox({-1.0}, {1.0}));
  const NetworkGraph g = ValueOrDie(MetropolisWeights({}, 1));
  AlgorithmConfig cfg;
  cfg.max_rounds = 50;
  cfg.step_a = 1.0;
  cfg.record_iterates = true;
  const Points x0 = {Vec({0.5})};
  const Trace t = ValueOrDie(RunDistributed(p, {}, g, cfg, x0));
  EXPECT_DOUBLE_EQ(t.iterates[1][0][0], 0.5 - 1.0 / 10.0 * 3.0);
  EXPECT_EQ(t.consensus[0], -1.0);
  EXPECT_EQ(t.stop_reason, StopReason::kConverged);
}

TEST(RunDistributedTest, ExampleReachesReferenceOptimizer) {
  const AgentProblem p = ExampleProblem();
  const NetworkGraph g = ValueOrDie(MetropolisWeights(CompleteGraphEdges(3), 3));
  for (Algorithm kind : {Algorithm::kDgd, Algorithm::kGradientTracking,
                         Algorithm::kZerothOrder}) {
    AlgorithmConfig cfg;
    cfg.kind = kind;
    double best = INFINITY;
    for (const Points& x0 : MultiStartPoints(p.domain(), 3, 5)) {
      const Trace t = ValueOrDie(RunDistributed(p, {}, g, cfg, x0));
      best = std::min(best, std::abs(t.consensus[0] - 2.62));
    }
    EXPECT_LE(best, 0.05) << AlgorithmName(kind);
  }
}

TEST(RunDistributedTest, Errors) {
  const AgentProblem p = ExampleProblem();
  const NetworkGraph g3 = ValueOrDie(MetropolisWeights(CompleteGraphEdges(3), 3));
  const NetworkGraph g2 = ValueOrDie(MetropolisWeights(CompleteGraphEdges(2), 2));
  const Points x0(3, Vec({0.0}));
  AlgorithmConfig cfg;
  EXPECT_THAT(RunDistributed(p, {}, g2, cfg, x0),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(RunDistributed(p, {}, g3, cfg, Points(2, Vec({0.0}))),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(RunDistributed(p, {}, g3, cfg, Points(3, Vec({11.0}))),
              StatusIs(absl::StatusCode::kInvalidArgument));
  const Points one_slope = {Vec({1.0})};
  EXPECT_THAT(RunDistributed(p, one_slope, g3, cfg, x0),
              StatusIs(absl::StatusCode::kInvalidArgument));
  AlgorithmConfig bad = cfg;
  bad.step_b = 0.5;
  EXPECT_THAT(RunDistributed(p, {}, g3, bad, x0),
              StatusIs(absl::StatusCode::kInvalidArgument));
  bad = cfg;
  bad.step_a = -1.0;
  EXPECT_THAT(RunDistributed(p, {}, g3, bad, x0),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(RunDistributedTest, DivergenceGuard) {
  const AgentProblem p = ExampleProblem();
  const NetworkGraph g = ValueOrDie(MetropolisWeights(CompleteGraphEdges(3), 3));
  AlgorithmConfig cfg;
  cfg.step_a = 1e4;
  EXPECT_THAT(RunDistributed(p, {}, g, cfg, Points(3, Vec({9.0}))),
              StatusIs(absl::StatusCode::kOutOfRange));
}

TEST(RunDistributedProperty, IteratesStayFeasible) {
  const AgentProblem p = ExampleProblem();
  const NetworkGraph g = ValueOrDie(MetropolisWeights(PathGraphEdges(3), 3));
  const Points slopes = {Vec({0.52}), Vec({-3.0}), Vec({0.38})};
  for (Algorithm kind : {Algorithm::kDgd, Algorithm::kGradientTracking,
                         Algorithm::kZerothOrder}) {
    AlgorithmConfig cfg;
    cfg.kind = kind;
    cfg.max_rounds = 500;
    cfg.record_iterates = true;
    const Points x0 = {Vec({-10.0}), Vec({10.0}), Vec({0.0})};
    const Trace t = ValueOrDie(RunDistributed(p, slopes, g, cfg, x0));
    for (const auto& round : t.iterates) {
      for (const Eigen::VectorXd& x : round) {
        ASSERT_TRUE(p.domain().ContainsPoint(x));
      }
    }
  }
}

TEST(RunDistributedProperty, PureAveragingContracts) {
  const AgentProblem flat = Quadratics({0, 0, 0, 0});
  std::vector<ObjectiveSpec> zeros;
  for (int i = 0; i < 4; ++i) {
    zeros.push_back(ValueOrDie(PolyToSpec(Polynomial::Zero(1), flat.domain())));
  }
  const AgentProblem p = ValueOrDie(AgentProblem::Create(zeros));
  const NetworkGraph g = ValueOrDie(MetropolisWeights(PathGraphEdges(4), 4));
  AlgorithmConfig cfg;
  cfg.max_rounds = 200;
  cfg.record_iterates = true;
  cfg.consensus_tolerance = 0.0;
  const Points x0 = {Vec({-9.0}), Vec({4.0}), Vec({1.0}), Vec({8.0})};
  const Trace t = ValueOrDie(RunDistributed(p, {}, g, cfg, x0));
  double prev = INFINITY;
  for (const auto& round : t.iterates) {
    double mean = 0;
    for (const auto& x : round) mean += x[0] / 4;
    double spread = 0;
    for (const auto& x : round) spread = std::max(spread, std::abs(x[0] - mean));
    EXPECT_LE(spread, prev + 1e-15);
    prev = spread;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(RunDistributedProperty, DeterministicUnderSeed) {
  // Two dimensions: in one dimension the random direction is +-1 and the
  // two-point estimate does not depend on it.
  const Box box = MakeBox({-5.0, -5.0}, {5.0, 5.0});
  std::vector<ObjectiveSpec> specs;
  for (double c : {-1.0, 0.5, 2.0}) {
    specs.push_back(ValueOrDie(PolyToSpec(
        ValueOrDie(Polynomial::Create(
            2, {{1.0, {2, 0}}, {2.0, {0, 2}}, {c, {1, 1}}, {-c, {1, 0}}})),
        box)));
  }
  const AgentProblem p = ValueOrDie(AgentProblem::Create(std::move(specs)));
  const NetworkGraph g = ValueOrDie(MetropolisWeights(CompleteGraphEdges(3), 3));
  AlgorithmConfig cfg;
  cfg.kind = Algorithm::kZerothOrder;
  cfg.seed = 1234;
  cfg.max_rounds = 2000;
  cfg.record_iterates = true;
  const Points x0 = {Vec({-4.0, 1.0}), Vec({0.0, 0.0}), Vec({4.0, -2.0})};
  const Trace a = ValueOrDie(RunDistributed(p, {}, g, cfg, x0));
  const Trace b = ValueOrDie(RunDistributed(p, {}, g, cfg, x0));
  std::ostringstream sa, sb;
  WriteTraceCsv(a, sa);
  WriteTraceCsv(b, sb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.consensus, b.consensus);
  cfg.seed = 4321;
  const Trace c = ValueOrDie(RunDistributed(p, {}, g, cfg, x0));
  EXPECT_NE(a.iterates, c.iterates);
}

TEST(TwoPointEstimateTest, ExactOnQuadratics) {
  // Central differences carry no truncation error on a quadratic.
  const ScalarField q = [](const Eigen::VectorXd& x) {
    return 3 * x[0] * x[0] - x[0] * x[1] + 2 * x[1] * x[1];
  };
  const Eigen::VectorXd x = Vec({0.7, -1.3});
  const Eigen::VectorXd u = Vec({0.6, 0.8});
  const Eigen::VectorXd grad = Vec({6 * 0.7 + 1.3, -0.7 - 4 * 1.3});
  const Eigen::VectorXd directional = grad.dot(u) * u;
  for (double mu : {1e-2, 1e-3}) {
    EXPECT_LE((TwoPointEstimate(q, x, u, mu) - directional).norm(), 1e-9);
  }
}

TEST(TwoPointEstimateTest, ErrorScalesWithSmoothing) {
  // On a cubic the error is mu^2 |u^3| g''' / 6: a tenfold smaller mu
  // shrinks it a hundredfold.
  const ScalarField c = [](const Eigen::VectorXd& x) { return x[0] * x[0] * x[0]; };
  const Eigen::VectorXd x = Vec({1.5});
  const Eigen::VectorXd u = Vec({1.0});
  const double exact = 3 * 1.5 * 1.5;
  const double mu = 1e-2;
  const double e1 = std::abs(TwoPointEstimate(c, x, u, mu)[0] - exact);
  const double e2 = std::abs(TwoPointEstimate(c, x, u, mu / 10)[0] - exact);
  EXPECT_NEAR(e1, mu * mu, 1e-9);
  EXPECT_NEAR(e1 / e2, 100.0, 1.0);
}

TEST(MultiStartPointsTest, MidpointsOfEqualSlices) {
  const auto s = MultiStartPoints(MakeBox({-10.0}, {10.0}), 3, 5);
  ASSERT_EQ(s.size(), 5u);
  EXPECT_EQ(s[0][0][0], -8.0);
  EXPECT_EQ(s[2][1][0], 0.0);
  EXPECT_EQ(s[4][2][0], 8.0);
}

TEST(TraceOutputTest, CsvAndSummary) {
  Trace t;
  t.consensus = Vec({1.0});
  t.iterates = {{Vec({0.5}), Vec({1.5})}};
  t.rounds = 0;
  std::ostringstream out;
  WriteTraceCsv(t, out);
  EXPECT_EQ(out.str(), "round,agent,x_1\n0,1,0.5\n0,2,1.5\n");
  const auto j = TraceSummaryJson(t);
  EXPECT_EQ(j.at("stop_reason"), "max_rounds");
}

}  // namespace
}  // namespace gpriv
