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

#ifndef GPRIV_SLOPE_DESIGN_H_
#define GPRIV_SLOPE_DESIGN_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "gpriv/interval.h"
#include "gpriv/mixed_monotone.h"
#include "gpriv/objective.h"
#include "gpriv/simplex.h"
#include "nlohmann/json.hpp"

namespace gpriv {

// The slope-design LP in its dualized matrix form, for a slope vertex m over
// X0 = [lo0, hi0] with n = dim:
//
//   min c' xi  over xi = [eta; rho; theta] in R^{2n+1}, p1, p2 in R^{3n}
//   s.t. lambda xi <= l,  p1' d <= 0,  p2' d <= 0,
//        gamma' p1 = xi,  -gamma' p2 = xi,  p1, p2 >= 0
//
// with gamma = [[0, -I, 0], [-I, 0, 0], [I, I, 0]],
//      lambda = diag(-I, -I, -1), c = [0; 1], d = [hi0; lo0; 0],
//      l = [max(m, 0); max(m, 0) - m; 0].
struct LpStandardForm {
  int n = 1;
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd lambda;
  Eigen::VectorXd c;
  Eigen::VectorXd d;
  Eigen::VectorXd l;

  int xi_dim() const { return 2 * n + 1; }
  int dual_dim() const { return 3 * n; }
  // Variables ordered [xi, p1, p2]; xi free, p1 and p2 nonnegative.
  LinearProgram ToLinearProgram() const;
};

absl::StatusOr<LpStandardForm> BuildLp(const SlopeVertex& vertex,
                                       const Box& domain);

struct SlopeDesignResult {
  Eigen::VectorXd xi_star;       // [eta; rho; theta]
  Eigen::VectorXd m_tilde_star;  // eta - rho
  double objective_value = 0.0;  // theta
  LpStatus status = LpStatus::kInfeasible;
};

// Solves the matrix-form LP above and extracts the slope.
absl::StatusOr<SlopeDesignResult> SolveLp(const LpStandardForm& lp);

// The robust slope problem
//   min_mt max_{lo0 <= lo <= hi <= hi0} |eta . lo - rho . hi|,
// eta = (m + mt)+ - m+, rho = (m + mt)- - m-, relaxed to independent
// eta >= -m+, rho >= -m- and written exactly through the three corner
// subintervals of each coordinate. Each coordinate is additionally forced
// away from zero, |mt_j| >= floor_j, by solving both sign branches and
// keeping the lowest optimum (first branch wins ties).
absl::StatusOr<SlopeDesignResult> SolveRobustWithFloor(
    const SlopeVertex& vertex, const Box& domain,
    const Eigen::VectorXd& floor);

// fraction * |m_j|, or `absolute` where m_j == 0.
Eigen::VectorXd DefaultSlopeFloor(const SlopeVertex& vertex,
                                  double fraction = 0.1,
                                  double absolute = 0.1);

// |(mh+ - m+) . lo - (mh- - m-) . hi| for mh = m + m_tilde on one sub-box.
double RobustObjective(const SlopeVertex& vertex,
                       const Eigen::VectorXd& m_tilde, const Box& sub);

// Max of RobustObjective over sampled sub-boxes of `domain`. Always includes
// every combination of per-coordinate corner subintervals [lo0, lo0],
// [hi0, hi0], [lo0, hi0] (for n <= 8), then `samples` random sub-boxes.
double BruteForceRobustValue(const SlopeVertex& vertex, const Box& domain,
                             const Eigen::VectorXd& m_tilde, int samples,
                             uint64_t seed);

struct SlopeDesignOptions {
  double floor_fraction = 0.1;
  double floor_absolute = 0.1;
  std::optional<Eigen::VectorXd> floor_override;
  int oracle_samples = 256;
  uint64_t seed = 0;
};

struct AgentSlopeDesign {
  int agent = 0;
  SlopeVertex vertex;
  SlopeDesignResult verbatim;
  SlopeDesignResult floored;
  Eigen::VectorXd floor;
  // Brute-force robust value at each extracted slope.
  double verbatim_robust_value = 0.0;
  double floored_robust_value = 0.0;
};

// Per agent: picks the vertex that minimizes the privacy gap for a zero
// perturbation, then solves both the matrix-form LP and the floored robust
// problem.
absl::StatusOr<std::vector<AgentSlopeDesign>> DesignSlopes(
    const AgentProblem& problem, const SlopeDesignOptions& options = {});

nlohmann::json SlopeDesignResultToJson(const SlopeDesignResult& r);
nlohmann::json AgentSlopeDesignToJson(const AgentSlopeDesign& d);

}  // namespace gpriv

#endif  // GPRIV_SLOPE_DESIGN_H_
