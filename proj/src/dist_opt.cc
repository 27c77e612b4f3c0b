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

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "fmt/format.h"
#include "gpriv/random.h"
#include "gpriv/status_macros.h"

namespace gpriv {
namespace {

constexpr double kDivergenceFactor = 10.0;
constexpr double kDefaultStepFraction = 0.01;
constexpr double kSmoothingFraction = 1e-4;

// g(x) = f(x) + m . x with a Horner fast path for univariate polynomials.
class AgentFunction {
 public:
  AgentFunction(const ObjectiveSpec& spec, Eigen::VectorXd slope)
      : spec_(&spec), slope_(std::move(slope)) {
    if (spec.polynomial() && spec.dim() == 1) {
      coeffs_ = *spec.polynomial()->UnivariateCoefficients();
      for (size_t k = 1; k < coeffs_.size(); ++k) {
        dcoeffs_.push_back(static_cast<double>(k) * coeffs_[k]);
      }
      univariate_ = true;
    }
  }

  double Value(const Eigen::VectorXd& x) const {
    if (univariate_) return Horner(coeffs_, x[0]) + slope_[0] * x[0];
    return spec_->Evaluate(x) + slope_.dot(x);
  }

  void Gradient(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
    if (univariate_) {
      out[0] = Horner(dcoeffs_, x[0]) + slope_[0];
      return;
    }
    out = spec_->Gradient(x) + slope_;
  }

 private:
  static double Horner(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (size_t k = c.size(); k-- > 0;) r = r * x + c[k];
    return r;
  }

  const ObjectiveSpec* spec_;
  Eigen::VectorXd slope_;
  std::vector<double> coeffs_;
  std::vector<double> dcoeffs_;
  bool univariate_ = false;
};

bool Connected(std::span<const Edge> edges, int n) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

}  // namespace

absl::StatusOr<NetworkGraph> MetropolisWeights(std::span<const Edge> edges,
                                               int node_count) {
  if (node_count < 1) {
    return absl::InvalidArgumentError("graph needs at least one node");
  }
  std::vector<Edge> clean;
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= node_count || b >= node_count) {
      return absl::InvalidArgumentError(
          absl::StrCat("edge (", a, ", ", b, ") out of range"));
    }
    if (a == b) return absl::InvalidArgumentError("self loops are not edges");
    const Edge e{std::min(a, b), std::max(a, b)};
    if (std::find(clean.begin(), clean.end(), e) == clean.end()) {
      clean.push_back(e);
    }
  }
  if (!Connected(clean, node_count)) {
    return absl::InvalidArgumentError("communication graph is disconnected");
  }
  std::vector<int> deg(node_count, 0);
  for (const auto& [a, b] : clean) {
    ++deg[a];
    ++deg[b];
  }
  NetworkGraph g;
  g.node_count = node_count;
  g.edges = clean;
  g.mixing = Eigen::MatrixXd::Zero(node_count, node_count);
  for (const auto& [a, b] : clean) {
    const double w = 1.0 / (1.0 + std::max(deg[a], deg[b]));
    g.mixing(a, b) = w;
    g.mixing(b, a) = w;
  }
  for (int i = 0; i < node_count; ++i) {
    g.mixing(i, i) = 1.0 - g.mixing.row(i).sum();
  }
  return g;
}

std::vector<Edge> CompleteGraphEdges(int node_count) {
  std::vector<Edge> e;
  for (int a = 0; a < node_count; ++a) {
    for (int b = a + 1; b < node_count; ++b) e.emplace_back(a, b);
  }
  return e;
}

std::vector<Edge> PathGraphEdges(int node_count) {
  std::vector<Edge> e;
  for (int a = 0; a + 1 < node_count; ++a) e.emplace_back(a, a + 1);
  return e;
}

std::string_view AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kDgd:
      return "dgd";
    case Algorithm::kGradientTracking:
      return "tracking";
    case Algorithm::kZerothOrder:
      return "zo";
  }
  return "unknown";
}

absl::StatusOr<Algorithm> ParseAlgorithm(std::string_view name) {
  if (name == "dgd") return Algorithm::kDgd;
  if (name == "tracking" || name == "gradient_tracking") {
    return Algorithm::kGradientTracking;
  }
  if (name == "zo" || name == "zeroth_order") return Algorithm::kZerothOrder;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown algorithm '", std::string(name), "'"));
}

std::string_view StopReasonName(StopReason r) {
  return r == StopReason::kConverged ? "converged" : "max_rounds";
}

Eigen::VectorXd TwoPointEstimate(const ScalarField& g, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u, double mu) {
  return (g(x + mu * u) - g(x - mu * u)) / (2.0 * mu) * u;
}

absl::StatusOr<Trace> RunDistributed(const AgentProblem& problem,
                                     std::span<const Eigen::VectorXd> slopes,
                                     const NetworkGraph& graph,
                                     const AlgorithmConfig& config,
                                     std::span<const Eigen::VectorXd> x0) {
  const int agents = problem.size();
  const int n = problem.dim();
  const Box& box = problem.domain();
  if (graph.node_count != agents) {
    return absl::InvalidArgumentError(absl::StrCat(
        "graph has ", graph.node_count, " nodes for ", agents, " agents"));
  }
  if (!slopes.empty() && static_cast<int>(slopes.size()) != agents) {
    return absl::InvalidArgumentError("need one slope per agent");
  }
  if (static_cast<int>(x0.size()) != agents) {
    return absl::InvalidArgumentError("need one start point per agent");
  }
  const double diam = Diameter(box);
  const double a = config.step_a.value_or(kDefaultStepFraction * diam);
  if (!(a > 0.0) || !(config.step_b >= 1.0) || config.max_rounds < 1) {
    return absl::InvalidArgumentError(
        "step schedule needs a > 0, b >= 1 and max_rounds >= 1");
  }

  std::vector<AgentFunction> fns;
  for (int i = 0; i < agents; ++i) {
    if (x0[i].size() != n || !box.ContainsPoint(x0[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("start point of agent ", i + 1, " is outside X0"));
    }
    if (!slopes.empty() && slopes[i].size() != n) {
      return absl::InvalidArgumentError("slope dimension mismatch");
    }
    fns.emplace_back(problem.objective(i),
                     slopes.empty() ? Eigen::VectorXd::Zero(n) : slopes[i]);
  }

  const double mu = kSmoothingFraction * (diam > 0.0 ? diam : 1.0);
  const double limit = kDivergenceFactor * diam;
  Rng rng(config.seed);
  Eigen::MatrixXd x(agents, n), mixed(agents, n), grad(agents, n);
  Eigen::MatrixXd y, y_mixed;
  Eigen::VectorXd xi(n), gi(n), u(n);
  for (int i = 0; i < agents; ++i) x.row(i) = x0[i].transpose();

  auto gradient_of = [&](int i, const Eigen::VectorXd& p, Eigen::VectorXd& out) {
    if (config.kind != Algorithm::kZerothOrder) {
      fns[i].Gradient(p, out);
      return;
    }
    for (int j = 0; j < n; ++j) u[j] = rng.Normal(0.0, 1.0);
    const double norm = u.norm();
    if (norm > 0.0) {
      u /= norm;
    } else {
      u.setZero();
      u[0] = 1.0;
    }
    const double gp = fns[i].Value(p + mu * u);
    const double gm = fns[i].Value(p - mu * u);
    out = (gp - gm) / (2.0 * mu) * u;
  };

  if (config.kind == Algorithm::kGradientTracking) {
    y.resize(agents, n);
    y_mixed.resize(agents, n);
    for (int i = 0; i < agents; ++i) {
      xi = x.row(i).transpose();
      fns[i].Gradient(xi, gi);
      y.row(i) = gi.transpose();
    }
  }

  Trace trace;
  if (config.record_iterates) {
    trace.iterates.emplace_back(x0.begin(), x0.end());
  }
  Eigen::VectorXd mean(n), avg_grad(n), step(n);
  for (int k = 0; k < config.max_rounds; ++k) {
    const double alpha = a / (k + config.step_b);
    mixed.noalias() = graph.mixing * x;
    const Eigen::MatrixXd* direction = &grad;
    if (config.kind == Algorithm::kGradientTracking) {
      direction = &y;
    } else {
      for (int i = 0; i < agents; ++i) {
        xi = x.row(i).transpose();
        gradient_of(i, xi, gi);
        grad.row(i) = gi.transpose();
      }
    }
    Eigen::MatrixXd next = mixed - alpha * *direction;
    for (int i = 0; i < agents; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = next(i, j);
        const double out = std::max(box.lo()[j] - v, v - box.hi()[j]);
        if (!(out <= limit)) {
          return absl::OutOfRangeError(fmt::format(
              "{} diverged in round {}: agent {} coordinate {} at {:.6g}, "
              "{:.6g} outside X0; reduce the step size",
              AlgorithmName(config.kind), k + 1, i + 1, j + 1, v, out));
        }
        next(i, j) = std::clamp(v, box.lo()[j], box.hi()[j]);
      }
    }
    if (config.kind == Algorithm::kGradientTracking) {
      y_mixed.noalias() = graph.mixing * y;
      for (int i = 0; i < agents; ++i) {
        xi = next.row(i).transpose();
        fns[i].Gradient(xi, gi);
        Eigen::VectorXd old(n);
        xi = x.row(i).transpose();
        fns[i].Gradient(xi, old);
        y.row(i) = y_mixed.row(i) + (gi - old).transpose();
      }
    }
    x = std::move(next);
    trace.rounds = k + 1;
    if (config.record_iterates) {
      std::vector<Eigen::VectorXd> row;
      for (int i = 0; i < agents; ++i) row.push_back(x.row(i).transpose());
      trace.iterates.push_back(std::move(row));
    }

    mean = x.colwise().mean().transpose();
    trace.disagreement =
        (x.rowwise() - mean.transpose()).cwiseAbs().maxCoeff();
    avg_grad.setZero();
    for (int i = 0; i < agents; ++i) {
      fns[i].Gradient(mean, gi);
      avg_grad += gi;
    }
    avg_grad /= agents;
    step = box.Project(mean - avg_grad) - mean;
    trace.stationarity = step.lpNorm<Eigen::Infinity>();
    if (trace.disagreement <= config.consensus_tolerance &&
        trace.stationarity <= config.stationarity_tolerance) {
      trace.stop_reason = StopReason::kConverged;
      break;
    }
  }
  trace.consensus = x.colwise().mean().transpose();
  return trace;
}

std::vector<std::vector<Eigen::VectorXd>> MultiStartPoints(const Box& domain,
                                                           int agents,
                                                           int starts) {
  std::vector<std::vector<Eigen::VectorXd>> out;
  for (int s = 0; s < starts; ++s) {
    const double t = (s + 0.5) / starts;
    const Eigen::VectorXd p = domain.lo() + t * domain.Widths();
    out.emplace_back(agents, p);
  }
  return out;
}

void WriteTraceCsv(const Trace& trace, std::ostream& out) {
  const int n = static_cast<int>(trace.consensus.size());
  out << "round,agent";
  for (int j = 1; j <= n; ++j) out << ",x_" << j;
  out << '\n';
  for (size_t k = 0; k < trace.iterates.size(); ++k) {
    for (size_t i = 0; i < trace.iterates[k].size(); ++i) {
      out << k << ',' << i + 1;
      for (int j = 0; j < n; ++j) {
        out << ',' << fmt::format("{:.17g}", trace.iterates[k][i][j]);
      }
      out << '\n';
    }
  }
}

nlohmann::json TraceSummaryJson(const Trace& trace) {
  return {{"consensus", VectorToJson(trace.consensus)},
          {"rounds", trace.rounds},
          {"stop_reason", std::string(StopReasonName(trace.stop_reason))},
          {"disagreement", trace.disagreement},
          {"stationarity", trace.stationarity}};
}

}  // namespace gpriv
