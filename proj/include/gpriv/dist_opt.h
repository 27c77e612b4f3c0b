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

#ifndef GPRIV_DIST_OPT_H_
#define GPRIV_DIST_OPT_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "gpriv/interval.h"
#include "gpriv/objective.h"
#include "nlohmann/json.hpp"

namespace gpriv {

using Edge = std::pair<int, int>;

struct NetworkGraph {
  int node_count = 0;
  std::vector<Edge> edges;
  Eigen::MatrixXd mixing;
};

// W_ij = 1 / (1 + max(deg_i, deg_j)) on edges, remainder on the diagonal.
absl::StatusOr<NetworkGraph> MetropolisWeights(std::span<const Edge> edges,
                                               int node_count);

std::vector<Edge> CompleteGraphEdges(int node_count);
std::vector<Edge> PathGraphEdges(int node_count);

enum class Algorithm { kDgd, kGradientTracking, kZerothOrder };

std::string_view AlgorithmName(Algorithm a);
absl::StatusOr<Algorithm> ParseAlgorithm(std::string_view name);

struct AlgorithmConfig {
  Algorithm kind = Algorithm::kDgd;
  // Step size a / (k + b); a defaults to 0.01 diam(X0).
  std::optional<double> step_a;
  double step_b = 10.0;
  int max_rounds = 20000;
  double consensus_tolerance = 1e-4;
  double stationarity_tolerance = 1e-3;
  uint64_t seed = 0;
  bool record_iterates = false;
};

enum class StopReason { kConverged, kMaxRounds };

std::string_view StopReasonName(StopReason r);

struct Trace {
  // iterates[k][i] is agent i after round k (round 0 is the start); only
  // filled when AlgorithmConfig::record_iterates is set.
  std::vector<std::vector<Eigen::VectorXd>> iterates;
  Eigen::VectorXd consensus;
  int rounds = 0;
  StopReason stop_reason = StopReason::kMaxRounds;
  double disagreement = 0.0;
  double stationarity = 0.0;
};

// Runs one synchronous distributed method on g_i = f_i + m_i x. `slopes`
// may be empty (no perturbation) or hold one slope per agent.
absl::StatusOr<Trace> RunDistributed(const AgentProblem& problem,
                                     std::span<const Eigen::VectorXd> slopes,
                                     const NetworkGraph& graph,
                                     const AlgorithmConfig& config,
                                     std::span<const Eigen::VectorXd> x0);

// (g(x + mu u) - g(x - mu u)) / (2 mu) u.
Eigen::VectorXd TwoPointEstimate(const ScalarField& g, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u, double mu);

// Start s of `starts` puts every agent at lo + (s + 1/2) / starts * width.
std::vector<std::vector<Eigen::VectorXd>> MultiStartPoints(const Box& domain,
                                                           int agents,
                                                           int starts);

// round,agent,x_1..x_n rows.
void WriteTraceCsv(const Trace& trace, std::ostream& out);

nlohmann::json TraceSummaryJson(const Trace& trace);

}  // namespace gpriv

#endif  // GPRIV_DIST_OPT_H_
