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

#ifndef GPRIV_ACCURACY_H_
#define GPRIV_ACCURACY_H_

#include <optional>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "gpriv/interval.h"
#include "gpriv/objective.h"
#include "nlohmann/json.hpp"

namespace gpriv {

// max(|mt+ . hi0 - mt- . lo0|, |mt+ . lo0 - mt- . hi0|).
double DeltaStar(const Eigen::VectorXd& m_tilde, const Box& domain);

// Sum_j |mt_j| width_j <= delta_star.
bool AdmissibleSlope(const Eigen::VectorXd& m_tilde, double delta_star,
                     const Box& domain);

// max ||y - z||_inf over y, z in X0 subject to mt_i . (y - z) <= 0 for every
// slope. Solved exactly as 2n linear programs
//   max theta  s.t.  theta <= s (y_j - z_j),  mt_i (y - z) <= 0,  y, z in X0
// one per coordinate j and sign s, taking the largest optimum.
absl::StatusOr<double> UpperBound(std::span<const Eigen::VectorXd> slopes,
                                  const Box& domain);

// Same program with the single constraint (Sum_i mt_i) . (y - z) >= 0, the
// sign a global minimizer y of f and z of f + (Sum_i mt_i) x must satisfy.
absl::StatusOr<double> SignCorrectedUpperBound(
    std::span<const Eigen::VectorXd> slopes, const Box& domain);

// max over pairs of ||x - xt||_inf.
absl::StatusOr<double> EmpiricalError(std::span<const Eigen::VectorXd> reference,
                                      std::span<const Eigen::VectorXd> perturbed);

// Largest value of (Sum_i mt_i) . (x - xt) over all pairs.
absl::StatusOr<double> NecessaryConditionValue(
    std::span<const Eigen::VectorXd> slopes,
    std::span<const Eigen::VectorXd> reference,
    std::span<const Eigen::VectorXd> perturbed);

inline constexpr int kMaxCertifiedDim = 2;
inline constexpr int kDefaultGridPoints1d = 100000;
inline constexpr int kDefaultGridPoints2d = 1000;

// Global minimizers of `spec` over its domain by exhaustive grid search and
// golden-section refinement. grid_points counts total points for n = 1 and
// points per axis for n = 2; zero selects the default. All minimizers whose
// refined value is within 1e-6 (1 + |best|) of the best are returned.
absl::StatusOr<std::vector<Eigen::VectorXd>> CertifyMinimizers(
    const ObjectiveSpec& spec, int grid_points = 0);

// CertifyMinimizers on the sum of the agents' objectives.
absl::StatusOr<std::vector<Eigen::VectorXd>> CertifyReferenceOptimizers(
    const AgentProblem& problem, int grid_points = 0);

struct AccuracyReport {
  std::vector<double> delta_star;
  std::vector<bool> admissible;
  double ub = 0.0;
  double ub_sign_corrected = 0.0;
  std::optional<double> empirical_error;
  std::optional<double> necessary_condition;
  std::vector<Eigen::VectorXd> reference_optimizers;
  std::vector<Eigen::VectorXd> perturbed_optimizers;
};

// Fills delta_star, admissible and both bounds for `slopes`.
absl::StatusOr<AccuracyReport> ComputeAccuracyReport(
    std::span<const Eigen::VectorXd> slopes, const Box& domain);

nlohmann::json AccuracyReportToJson(const AccuracyReport& r);

}  // namespace gpriv

#endif  // GPRIV_ACCURACY_H_
