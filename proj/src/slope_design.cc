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

#include "gpriv/slope_design.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "gpriv/privacy.h"
#include "gpriv/status_macros.h"

namespace gpriv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SlopeDesignResult FromXi(Eigen::VectorXd xi, int n, LpStatus status) {
  SlopeDesignResult r;
  r.status = status;
  if (status != LpStatus::kOptimal) return r;
  r.m_tilde_star = xi.head(n) - xi.segment(n, n);
  r.objective_value = xi[2 * n];
  r.xi_star = std::move(xi);
  return r;
}

}  // namespace

LinearProgram LpStandardForm::ToLinearProgram() const {
  const int nx = xi_dim();
  const int np = dual_dim();
  LinearProgram lp = LinearProgram::WithVariables(nx + 2 * np);
  lp.lower.head(nx).setConstant(-kInf);
  lp.cost.head(nx) = c;

  for (int r = 0; r < nx; ++r) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(lp.num_vars());
    row.head(nx) = lambda.row(r);
    lp.AddRow(row, RowSense::kLessEqual, l[r]);
  }
  for (int which = 0; which < 2; ++which) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(lp.num_vars());
    row.segment(nx + which * np, np) = d.transpose();
    lp.AddRow(row, RowSense::kLessEqual, 0.0);
  }
  // gamma' p1 - xi = 0 and -gamma' p2 - xi = 0.
  const Eigen::MatrixXd gt = gamma.transpose();
  for (int which = 0; which < 2; ++which) {
    const double sign = which == 0 ? 1.0 : -1.0;
    for (int r = 0; r < nx; ++r) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(lp.num_vars());
      row[r] = -1.0;
      row.segment(nx + which * np, np) = sign * gt.row(r);
      lp.AddRow(row, RowSense::kEqual, 0.0);
    }
  }
  return lp;
}

absl::StatusOr<LpStandardForm> BuildLp(const SlopeVertex& vertex,
                                       const Box& domain) {
  const int n = domain.dim();
  if (vertex.slope.size() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "slope vertex has dimension ", vertex.slope.size(), ", domain ", n));
  }
  LpStandardForm f;
  f.n = n;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  f.gamma = Eigen::MatrixXd::Zero(3 * n, 2 * n + 1);
  f.gamma.block(0, n, n, n) = -eye;
  f.gamma.block(n, 0, n, n) = -eye;
  f.gamma.block(2 * n, 0, n, n) = eye;
  f.gamma.block(2 * n, n, n, n) = eye;
  f.lambda = -Eigen::MatrixXd::Identity(2 * n + 1, 2 * n + 1);
  f.c = Eigen::VectorXd::Zero(2 * n + 1);
  f.c[2 * n] = 1.0;
  f.d = Eigen::VectorXd::Zero(3 * n);
  f.d.head(n) = domain.hi();
  f.d.segment(n, n) = domain.lo();
  const Eigen::VectorXd pos = vertex.slope.cwiseMax(0.0);
  f.l = Eigen::VectorXd::Zero(2 * n + 1);
  f.l.head(n) = pos;
  f.l.segment(n, n) = pos - vertex.slope;
  return f;
}

absl::StatusOr<SlopeDesignResult> SolveLp(const LpStandardForm& lp) {
  GPRIV_ASSIGN_OR_RETURN(const LpSolution sol,
                         SolveLinearProgram(lp.ToLinearProgram()));
  if (sol.status != LpStatus::kOptimal) return FromXi({}, lp.n, sol.status);
  return FromXi(sol.x.head(lp.xi_dim()), lp.n, sol.status);
}

absl::StatusOr<SlopeDesignResult> SolveRobustWithFloor(
    const SlopeVertex& vertex, const Box& domain,
    const Eigen::VectorXd& floor) {
  const int n = domain.dim();
  if (vertex.slope.size() != n || floor.size() != n) {
    return absl::InvalidArgumentError("slope/floor dimension mismatch");
  }
  if ((floor.array() < 0.0).any()) {
    return absl::InvalidArgumentError("slope floor must be nonnegative");
  }
  // Variables: eta (n), rho (n), theta, t (n), s (n).
  const int eta = 0, rho = n, theta = 2 * n, t = 2 * n + 1, s = 3 * n + 1;
  const int nv = 4 * n + 1;
  const Eigen::VectorXd pos = vertex.slope.cwiseMax(0.0);
  const Eigen::VectorXd neg = pos - vertex.slope;

  LinearProgram base = LinearProgram::WithVariables(nv);
  base.lower.segment(eta, n) = -pos;
  base.lower.segment(rho, n) = -neg;
  base.lower.segment(t, 2 * n).setConstant(-kInf);
  base.cost[theta] = 1.0;
  for (int j = 0; j < n; ++j) {
    const double lo = domain.lo()[j], hi = domain.hi()[j];
    const double corners[3][2] = {{lo, lo}, {hi, hi}, {lo, hi}};
    for (const auto& [v, w] : corners) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nv);
      row[eta + j] = v;
      row[rho + j] = -w;
      row[t + j] = -1.0;
      base.AddRow(row, RowSense::kLessEqual, 0.0);
      row[eta + j] = -v;
      row[rho + j] = w;
      row[t + j] = 0.0;
      row[s + j] = -1.0;
      base.AddRow(row, RowSense::kLessEqual, 0.0);
    }
  }
  for (int block : {t, s}) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nv);
    row.segment(block, n).setOnes();
    row[theta] = -1.0;
    base.AddRow(row, RowSense::kLessEqual, 0.0);
  }

  std::optional<SlopeDesignResult> best;
  bool unbounded = false;
  const uint64_t branches = uint64_t{1} << n;
  for (uint64_t mask = 0; mask < branches; ++mask) {
    LinearProgram lp = base;
    for (int j = 0; j < n; ++j) {
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nv);
      row[eta + j] = 1.0;
      row[rho + j] = -1.0;
      if (((mask >> j) & 1u) == 0) {
        lp.AddRow(row, RowSense::kGreaterEqual, floor[j]);
      } else {
        lp.AddRow(row, RowSense::kLessEqual, -floor[j]);
      }
    }
    GPRIV_ASSIGN_OR_RETURN(const LpSolution sol, SolveLinearProgram(lp));
    if (sol.status == LpStatus::kUnbounded) unbounded = true;
    if (sol.status != LpStatus::kOptimal) continue;
    if (!best || sol.x[theta] < best->objective_value) {
      best = FromXi(sol.x.head(2 * n + 1), n, LpStatus::kOptimal);
    }
  }
  if (best) return *best;
  SlopeDesignResult none;
  none.status = unbounded ? LpStatus::kUnbounded : LpStatus::kInfeasible;
  return none;
}

Eigen::VectorXd DefaultSlopeFloor(const SlopeVertex& vertex, double fraction,
                                  double absolute) {
  Eigen::VectorXd floor(vertex.slope.size());
  for (Eigen::Index j = 0; j < floor.size(); ++j) {
    floor[j] = vertex.slope[j] == 0.0 ? absolute
                                      : fraction * std::abs(vertex.slope[j]);
  }
  return floor;
}

double RobustObjective(const SlopeVertex& vertex,
                       const Eigen::VectorXd& m_tilde, const Box& sub) {
  const Eigen::VectorXd& m = vertex.slope;
  const Eigen::VectorXd mh = m + m_tilde;
  const Eigen::VectorXd m_pos = m.cwiseMax(0.0);
  const Eigen::VectorXd mh_pos = mh.cwiseMax(0.0);
  const Eigen::VectorXd eta = mh_pos - m_pos;
  const Eigen::VectorXd rho = (mh_pos - mh) - (m_pos - m);
  return std::abs(eta.dot(sub.lo()) - rho.dot(sub.hi()));
}

double BruteForceRobustValue(const SlopeVertex& vertex, const Box& domain,
                             const Eigen::VectorXd& m_tilde, int samples,
                             uint64_t seed) {
  const int n = domain.dim();
  double best = 0.0;
  auto visit = [&](const Box& b) {
    best = std::max(best, RobustObjective(vertex, m_tilde, b));
  };
  if (n <= 8) {
    int combos = 1;
    for (int j = 0; j < n; ++j) combos *= 3;
    for (int code = 0; code < combos; ++code) {
      Eigen::VectorXd lo(n), hi(n);
      int rest = code;
      for (int j = 0; j < n; ++j) {
        const int pick = rest % 3;
        rest /= 3;
        lo[j] = pick == 1 ? domain.hi()[j] : domain.lo()[j];
        hi[j] = pick == 0 ? domain.lo()[j] : domain.hi()[j];
      }
      visit(*Box::Create(std::move(lo), std::move(hi)));
    }
  } else {
    visit(Box::Singleton(domain.lo()));
    visit(Box::Singleton(domain.hi()));
    visit(domain);
  }
  for (const Box& b : SampleSubintervals(domain, samples, seed)) visit(b);
  return best;
}

absl::StatusOr<std::vector<AgentSlopeDesign>> DesignSlopes(
    const AgentProblem& problem, const SlopeDesignOptions& options) {
  const Box& domain = problem.domain();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(problem.dim());
  std::vector<AgentSlopeDesign> out;
  for (int i = 0; i < problem.size(); ++i) {
    auto fail = [i](const absl::Status& s) {
      return absl::Status(s.code(),
                          absl::StrCat("agent ", i + 1, ": ", s.message()));
    };
    AgentSlopeDesign design;
    design.agent = i;
    auto dec = EpsilonMinimizingDecomposition(problem.objective(i), zero);
    if (!dec.ok()) return fail(dec.status());
    design.vertex = dec->vertex();

    auto lp = BuildLp(design.vertex, domain);
    if (!lp.ok()) return fail(lp.status());
    auto verbatim = SolveLp(*lp);
    if (!verbatim.ok()) return fail(verbatim.status());
    design.verbatim = *std::move(verbatim);

    design.floor = options.floor_override.value_or(DefaultSlopeFloor(
        design.vertex, options.floor_fraction, options.floor_absolute));
    auto floored = SolveRobustWithFloor(design.vertex, domain, design.floor);
    if (!floored.ok()) return fail(floored.status());
    design.floored = *std::move(floored);

    if (design.verbatim.status == LpStatus::kOptimal) {
      design.verbatim_robust_value = BruteForceRobustValue(
          design.vertex, domain, design.verbatim.m_tilde_star,
          options.oracle_samples, options.seed);
    }
    if (design.floored.status == LpStatus::kOptimal) {
      design.floored_robust_value = BruteForceRobustValue(
          design.vertex, domain, design.floored.m_tilde_star,
          options.oracle_samples, options.seed);
    }
    out.push_back(std::move(design));
  }
  return out;
}

nlohmann::json SlopeDesignResultToJson(const SlopeDesignResult& r) {
  nlohmann::json j = {{"status", std::string(LpStatusName(r.status))}};
  if (r.status == LpStatus::kOptimal) {
    j["xi_star"] = VectorToJson(r.xi_star);
    j["m_tilde_star"] = VectorToJson(r.m_tilde_star);
    j["objective_value"] = r.objective_value;
  }
  return j;
}

nlohmann::json AgentSlopeDesignToJson(const AgentSlopeDesign& d) {
  std::vector<int> mask;
  for (bool b : d.vertex.upper) mask.push_back(b ? 1 : 0);
  return {{"agent", d.agent + 1},
          {"vertex_slope", VectorToJson(d.vertex.slope)},
          {"vertex_mask", mask},
          {"verbatim", SlopeDesignResultToJson(d.verbatim)},
          {"verbatim_robust_value", d.verbatim_robust_value},
          {"slope_floor", VectorToJson(d.floor)},
          {"floored", SlopeDesignResultToJson(d.floored)},
          {"floored_robust_value", d.floored_robust_value}};
}

}  // namespace gpriv
