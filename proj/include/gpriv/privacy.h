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

#ifndef GPRIV_PRIVACY_H_
#define GPRIV_PRIVACY_H_

#include <optional>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "gpriv/interval.h"
#include "gpriv/mixed_monotone.h"
#include "gpriv/objective.h"
#include "nlohmann/json.hpp"

namespace gpriv {

// Perturbation slopes m_i and vicinity radii delta_i, one per agent.
class Mechanism {
 public:
  static absl::StatusOr<Mechanism> Create(const AgentProblem& problem,
                                          std::vector<Eigen::VectorXd> slopes,
                                          std::vector<double> radii);
  // Radii default to max(delta*_i, |m_i| . width), the smallest radius for
  // which the perturbation itself stays in the vicinity.
  static absl::StatusOr<Mechanism> WithDefaultRadii(
      const AgentProblem& problem, std::vector<Eigen::VectorXd> slopes);

  int size() const { return static_cast<int>(slopes_.size()); }
  const std::vector<Eigen::VectorXd>& slopes() const { return slopes_; }
  const std::vector<double>& radii() const { return radii_; }
  const Box& domain() const { return domain_; }

 private:
  Mechanism(std::vector<Eigen::VectorXd> slopes, std::vector<double> radii,
            Box domain)
      : slopes_(std::move(slopes)),
        radii_(std::move(radii)),
        domain_(std::move(domain)) {}

  std::vector<Eigen::VectorXd> slopes_;
  std::vector<double> radii_;
  Box domain_;
};

double DefaultRadius(const Eigen::VectorXd& slope, const Box& domain);

// The vertex whose published range width C = width(h) + |m + slope| . width
// over the spec's domain is largest (first in enumeration order on ties).
// This is the privacy-gap minimizer for every delta > 0.
absl::StatusOr<JssDecomposition> EpsilonMinimizingDecomposition(
    const ObjectiveSpec& spec, const Eigen::VectorXd& slope);

struct EpsilonGap {
  double epsilon = 0.0;
  SlopeVertex vertex;
  double range_width = 0.0;  // C at the minimizing vertex
};

// ln((C + 2 delta) / C) / delta.
double EpsilonFromWidth(double range_width, double delta);

// min over vertices of ln((C + 2 delta) / C) / delta.
absl::StatusOr<EpsilonGap> ComputeEpsilonGap(const ObjectiveSpec& spec,
                                             const Eigen::VectorXd& slope,
                                             double delta);

// Value of the gap at one given vertex.
absl::StatusOr<double> EpsilonAtVertex(const ObjectiveSpec& spec,
                                       const SlopeVertex& vertex,
                                       const Eigen::VectorXd& slope,
                                       double delta);

// Per-agent inclusion of f_i + m_i x over `box`, each built from the agent's
// epsilon-minimizing vertex.
absl::StatusOr<IntervalVector> ApplyMechanism(const AgentProblem& problem,
                                              const Mechanism& mech,
                                              const Box& box);

struct PrivacyReport {
  std::vector<double> per_agent_eps;
  double overall_eps = 0.0;
  std::vector<SlopeVertex> minimizing_vertex;
  std::vector<double> diam_true;
  std::vector<double> radii;
};

absl::StatusOr<PrivacyReport> ComputePrivacyReport(const AgentProblem& problem,
                                                   const Mechanism& mech);

struct VicinityCertificate {
  std::optional<int> agent_index;  // nullopt when F and F' agree
  double sup_distance = 0.0;
  bool within = true;
};

// Finds the single agent whose objective differs and bounds
// sup_{x in X0} |f'_i(x) - f_i(x)|: exactly for affine polynomial
// differences, otherwise by the mixed-monotone inclusion of the difference.
// Non-polynomial objectives are compared by their Jacobian bounds and their
// values at the domain vertices and a fixed sample.
absl::StatusOr<VicinityCertificate> CheckAdjacency(const AgentProblem& f,
                                                   const AgentProblem& fp,
                                                   const Mechanism& mech);

struct PrivacyCheck {
  bool holds = false;
  double lhs = 0.0;  // diam(M(F', X0) n I)
  double rhs = 0.0;  // exp(eps * sup_distance) diam(M(F, X0))
  double slack = 0.0;
  double epsilon = 0.0;
  VicinityCertificate certificate;
  // exp(eps_i delta_i) width(M_i(F)) - width(M_i(F') n I_i).
  std::vector<double> agent_slack;
};

absl::StatusOr<PrivacyCheck> VerifyPrivacyInequality(
    const AgentProblem& f, const AgentProblem& fp, const Mechanism& mech,
    const IntervalVector& witness);

nlohmann::json PrivacyReportToJson(const PrivacyReport& r);
nlohmann::json PrivacyCheckToJson(const PrivacyCheck& c);

}  // namespace gpriv

#endif  // GPRIV_PRIVACY_H_
