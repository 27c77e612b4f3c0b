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

#include "gpriv/simplex.h"

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "absl/strings/str_cat.h"
#include "fmt/format.h"

namespace gpriv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// How an original variable is expressed through nonnegative columns:
// x = offset + sum(sign * column).
struct VariableMap {
  double offset = 0.0;
  std::vector<std::pair<int, double>> columns;
};

class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis, double tol)
      : t_(std::move(t)), basis_(std::move(basis)), tol_(tol) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  Eigen::MatrixXd& data() { return t_; }
  std::vector<int>& basis() { return basis_; }
  double objective() const { return -t_(rows(), cols()); }

  // Loads `cost` into the objective row and prices out the basis.
  void SetObjective(const Eigen::VectorXd& cost) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(cost.size()) = cost.transpose();
    for (int r = 0; r < rows(); ++r) {
      const double c = t_(rows(), basis_[r]);
      if (c != 0.0) t_.row(rows()) -= c * t_.row(r);
    }
  }

  void Pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int r = 0; r <= rows(); ++r) {
      if (r == row) continue;
      const double factor = t_(r, col);
      if (factor != 0.0) t_.row(r) -= factor * t_.row(row);
    }
    basis_[row] = col;
  }

  enum class Outcome { kOptimal, kUnbounded, kPivotLimit, kTinyPivot };

  // Bland's rule over columns [0, usable_cols).
  Outcome Run(int usable_cols, int max_pivots, int* pivots) {
    while (true) {
      int entering = -1;
      for (int c = 0; c < usable_cols; ++c) {
        if (t_(rows(), c) < -tol_) {
          entering = c;
          break;
        }
      }
      if (entering < 0) return Outcome::kOptimal;
      int leaving = -1;
      double best_ratio = kInf;
      for (int r = 0; r < rows(); ++r) {
        const double a = t_(r, entering);
        if (a <= tol_) continue;
        const double ratio = t_(r, cols()) / a;
        if (ratio < best_ratio - tol_ ||
            (leaving >= 0 && std::abs(ratio - best_ratio) <= tol_ &&
             basis_[r] < basis_[leaving])) {
          best_ratio = ratio;
          leaving = r;
        }
      }
      if (leaving < 0) return Outcome::kUnbounded;
      if (std::abs(t_(leaving, entering)) < 1e3 * std::numeric_limits<double>::epsilon()) {
        return Outcome::kTinyPivot;
      }
      if (++*pivots > max_pivots) return Outcome::kPivotLimit;
      Pivot(leaving, entering);
    }
  }

  void DropRow(int row) {
    const int last = static_cast<int>(t_.rows()) - 1;
    Eigen::MatrixXd next(t_.rows() - 1, t_.cols());
    next.topRows(row) = t_.topRows(row);
    next.bottomRows(last - row) = t_.bottomRows(last - row);
    t_ = std::move(next);
    basis_.erase(basis_.begin() + row);
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  double tol_;
};

absl::Status NumericalError(std::string_view phase, Tableau::Outcome outcome,
                            const LinearProgram& lp, int pivots) {
  const double scale = lp.a.size() > 0 ? lp.a.cwiseAbs().maxCoeff() : 0.0;
  const char* what = outcome == Tableau::Outcome::kPivotLimit
                         ? "pivot limit reached"
                         : "pivot element below tolerance";
  return absl::InternalError(absl::StrCat(
      "simplex ", std::string(phase), ": ", what, " after ", pivots,
      " pivots (rows=", lp.num_rows(), ", vars=", lp.num_vars(),
      ", max |a_ij|=", scale, ")"));
}

}  // namespace

LinearProgram LinearProgram::WithVariables(int num_vars) {
  LinearProgram lp;
  lp.a.resize(0, num_vars);
  lp.b.resize(0);
  lp.cost = Eigen::VectorXd::Zero(num_vars);
  lp.lower = Eigen::VectorXd::Zero(num_vars);
  lp.upper = Eigen::VectorXd::Constant(num_vars, kInf);
  return lp;
}

void LinearProgram::AddRow(const Eigen::RowVectorXd& coefficients,
                           RowSense sense, double rhs) {
  a.conservativeResize(a.rows() + 1, cost.size());
  a.row(a.rows() - 1) = coefficients;
  b.conservativeResize(b.size() + 1);
  b[b.size() - 1] = rhs;
  senses.push_back(sense);
}

std::string_view LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

absl::StatusOr<LpSolution> SolveLinearProgram(const LinearProgram& lp,
                                              const SimplexOptions& options) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  if (lp.a.rows() != m || lp.a.cols() != n ||
      static_cast<int>(lp.senses.size()) != m || lp.lower.size() != n ||
      lp.upper.size() != n) {
    return absl::InvalidArgumentError("linear program dimensions disagree");
  }
  for (int k = 0; k < n; ++k) {
    if (lp.lower[k] > lp.upper[k]) {
      return LpSolution{LpStatus::kInfeasible, {}, 0.0, 0};
    }
  }

  // Columns for the structural variables.
  std::vector<VariableMap> maps(n);
  std::vector<std::pair<int, double>> upper_rows;  // (column, bound)
  int ncols = 0;
  for (int k = 0; k < n; ++k) {
    const double lo = lp.lower[k];
    const double hi = lp.upper[k];
    if (std::isfinite(lo)) {
      maps[k] = {lo, {{ncols, 1.0}}};
      if (std::isfinite(hi)) upper_rows.push_back({ncols, hi - lo});
      ++ncols;
    } else if (std::isfinite(hi)) {
      maps[k] = {hi, {{ncols, -1.0}}};
      ++ncols;
    } else {
      maps[k] = {0.0, {{ncols, 1.0}, {ncols + 1, -1.0}}};
      ncols += 2;
    }
  }
  const int structural = ncols;

  // Rows in column space, before slacks.
  const int total_rows = m + static_cast<int>(upper_rows.size());
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(total_rows, structural);
  Eigen::VectorXd rhs(total_rows);
  std::vector<RowSense> senses(total_rows);
  for (int i = 0; i < m; ++i) {
    double shift = 0.0;
    for (int k = 0; k < n; ++k) {
      const double a = lp.a(i, k);
      if (a == 0.0) continue;
      shift += a * maps[k].offset;
      for (const auto& [col, sign] : maps[k].columns) rows(i, col) += a * sign;
    }
    rhs[i] = lp.b[i] - shift;
    senses[i] = lp.senses[i];
  }
  for (std::size_t u = 0; u < upper_rows.size(); ++u) {
    rows(m + u, upper_rows[u].first) = 1.0;
    rhs[m + u] = upper_rows[u].second;
    senses[m + u] = RowSense::kLessEqual;
  }

  // Slack columns, then sign normalization so that rhs >= 0.
  std::vector<int> slack_col(total_rows, -1);
  for (int i = 0; i < total_rows; ++i) {
    if (senses[i] != RowSense::kEqual) slack_col[i] = ncols++;
  }
  const int with_slacks = ncols;
  Eigen::MatrixXd body = Eigen::MatrixXd::Zero(total_rows, with_slacks);
  body.leftCols(structural) = rows;
  for (int i = 0; i < total_rows; ++i) {
    if (slack_col[i] >= 0) {
      body(i, slack_col[i]) = senses[i] == RowSense::kLessEqual ? 1.0 : -1.0;
    }
    if (rhs[i] < 0.0) {
      body.row(i) *= -1.0;
      rhs[i] = -rhs[i];
    }
  }

  // Initial basis: a +1 slack where available, otherwise an artificial.
  std::vector<int> basis(total_rows);
  std::vector<int> artificial_rows;
  for (int i = 0; i < total_rows; ++i) {
    if (slack_col[i] >= 0 && body(i, slack_col[i]) == 1.0) {
      basis[i] = slack_col[i];
    } else {
      artificial_rows.push_back(i);
    }
  }
  const int num_art = static_cast<int>(artificial_rows.size());
  const int width = with_slacks + num_art;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(total_rows + 1, width + 1);
  t.topLeftCorner(total_rows, with_slacks) = body;
  t.topRightCorner(total_rows, 1) = rhs;
  for (int a = 0; a < num_art; ++a) {
    t(artificial_rows[a], with_slacks + a) = 1.0;
    basis[artificial_rows[a]] = with_slacks + a;
  }
  Tableau tableau(std::move(t), std::move(basis), options.tolerance);

  LpSolution solution;
  if (num_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(width);
    phase1.tail(num_art).setOnes();
    tableau.SetObjective(phase1);
    const auto outcome = tableau.Run(width, options.max_pivots, &solution.pivots);
    if (outcome == Tableau::Outcome::kPivotLimit ||
        outcome == Tableau::Outcome::kTinyPivot) {
      return NumericalError("phase 1", outcome, lp, solution.pivots);
    }
    const double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
    if (tableau.objective() > 1e-7 * scale) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (int r = tableau.rows() - 1; r >= 0; --r) {
      if (tableau.basis()[r] < with_slacks) continue;
      int col = -1;
      for (int c = 0; c < with_slacks; ++c) {
        if (std::abs(tableau.data()(r, c)) > options.tolerance) {
          col = c;
          break;
        }
      }
      if (col >= 0) {
        tableau.Pivot(r, col);
      } else {
        tableau.DropRow(r);
      }
    }
  }

  // Phase 2 over structural and slack columns; artificials are barred.
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(width);
  const double direction = lp.maximize ? -1.0 : 1.0;
  for (int k = 0; k < n; ++k) {
    for (const auto& [col, sign] : maps[k].columns) {
      cost[col] += direction * lp.cost[k] * sign;
    }
  }
  tableau.SetObjective(cost);
  const auto outcome =
      tableau.Run(with_slacks, options.max_pivots, &solution.pivots);
  if (outcome == Tableau::Outcome::kUnbounded) {
    solution.status = LpStatus::kUnbounded;
    return solution;
  }
  if (outcome != Tableau::Outcome::kOptimal) {
    return NumericalError("phase 2", outcome, lp, solution.pivots);
  }

  Eigen::VectorXd columns = Eigen::VectorXd::Zero(width);
  for (int r = 0; r < tableau.rows(); ++r) {
    columns[tableau.basis()[r]] = tableau.data()(r, tableau.cols());
  }
  solution.x.resize(n);
  for (int k = 0; k < n; ++k) {
    double v = maps[k].offset;
    for (const auto& [col, sign] : maps[k].columns) v += sign * columns[col];
    solution.x[k] = v;
  }
  solution.objective = lp.cost.dot(solution.x);
  solution.status = LpStatus::kOptimal;
  return solution;
}

std::string CanonicalText(const LinearProgram& lp) {
  std::string out;
  auto row_text = [](const Eigen::RowVectorXd& row) {
    std::string s;
    for (Eigen::Index k = 0; k < row.size(); ++k) {
      if (k > 0) s += ' ';
      s += fmt::format("{:.17g}", row[k]);
    }
    return s;
  };
  out += fmt::format("{} {}\n", lp.maximize ? "max" : "min",
                     row_text(lp.cost.transpose()));
  for (int i = 0; i < lp.num_rows(); ++i) {
    const char* sense = lp.senses[i] == RowSense::kLessEqual ? "<="
                        : lp.senses[i] == RowSense::kEqual   ? "="
                                                             : ">=";
    out += fmt::format("row {} {} {:.17g}\n", row_text(lp.a.row(i)), sense,
                       lp.b[i]);
  }
  for (int k = 0; k < lp.num_vars(); ++k) {
    out += fmt::format("bound x{} {:.17g} {:.17g}\n", k, lp.lower[k],
                       lp.upper[k]);
  }
  return out;
}

}  // namespace gpriv
