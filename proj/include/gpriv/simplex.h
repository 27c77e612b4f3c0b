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

#ifndef GPRIV_SIMPLEX_H_
#define GPRIV_SIMPLEX_H_

#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"

namespace gpriv {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// min (or max) cost . x  s.t.  a x (sense) b,  lower <= x <= upper.
// Infinite bounds are allowed.
struct LinearProgram {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<RowSense> senses;
  Eigen::VectorXd cost;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  bool maximize = false;

  // An LP over `num_vars` nonnegative variables with no rows yet.
  static LinearProgram WithVariables(int num_vars);
  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(b.size()); }
  void AddRow(const Eigen::RowVectorXd& coefficients, RowSense sense,
              double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
std::string_view LpStatusName(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;  // set when status == kOptimal
  double objective = 0.0;
  int pivots = 0;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  int max_pivots = 100000;
};

// Dense two-phase primal simplex with Bland's rule. Deterministic: identical
// inputs give bitwise-identical outputs. Numerical trouble (pivot limit, tiny
// pivots) is reported as an internal error carrying diagnostics.
absl::StatusOr<LpSolution> SolveLinearProgram(const LinearProgram& lp,
                                              const SimplexOptions& options = {});

// Plain-text canonical form: objective row, one line per constraint row,
// then variable bounds. Stable across runs for diffing and external checks.
std::string CanonicalText(const LinearProgram& lp);

}  // namespace gpriv

#endif  // GPRIV_SIMPLEX_H_
