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

#ifndef GPRIV_OBJECTIVE_H_
#define GPRIV_OBJECTIVE_H_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "gpriv/interval.h"
#include "gpriv/polynomial.h"
#include "nlohmann/json.hpp"

namespace gpriv {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;
using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Componentwise bounds on a gradient row vector over some box.
struct JacobianBounds {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

// One agent's objective: evaluator, gradient, and uniform Jacobian bounds
// valid over `domain`. Immutable; the callables must be pure.
class ObjectiveSpec {
 public:
  static absl::StatusOr<ObjectiveSpec> Create(
      Box domain, ScalarField evaluate, VectorField gradient,
      JacobianBounds bounds, std::optional<Polynomial> polynomial = {});

  int dim() const { return domain_.dim(); }
  double Evaluate(const Eigen::VectorXd& x) const { return evaluate_(x); }
  Eigen::VectorXd Gradient(const Eigen::VectorXd& x) const {
    return gradient_(x);
  }
  const Eigen::VectorXd& jac_lo() const { return bounds_.lo; }
  const Eigen::VectorXd& jac_hi() const { return bounds_.hi; }
  const JacobianBounds& bounds() const { return bounds_; }
  const Box& domain() const { return domain_; }
  const ScalarField& evaluator() const { return evaluate_; }
  const VectorField& gradient_field() const { return gradient_; }
  // Present when the objective is known to be this polynomial.
  const std::optional<Polynomial>& polynomial() const { return polynomial_; }

 private:
  ObjectiveSpec(Box domain, ScalarField evaluate, VectorField gradient,
                JacobianBounds bounds, std::optional<Polynomial> polynomial)
      : domain_(std::move(domain)),
        evaluate_(std::move(evaluate)),
        gradient_(std::move(gradient)),
        bounds_(std::move(bounds)),
        polynomial_(std::move(polynomial)) {}

  Box domain_;
  ScalarField evaluate_;
  VectorField gradient_;
  JacobianBounds bounds_;
  std::optional<Polynomial> polynomial_;
};

// Per-coordinate enclosure of the gradient of `p` over `box`.
JacobianBounds PolynomialJacobianBounds(const Polynomial& p, const Box& box);

// Spec whose Jacobian bounds come from interval evaluation of each partial
// derivative over `domain`.
absl::StatusOr<ObjectiveSpec> PolyToSpec(const Polynomial& p,
                                         const Box& domain);

// Same objective with caller-supplied Jacobian bounds. Used for
// non-polynomial objectives and for deliberately corrupted fixtures.
absl::StatusOr<ObjectiveSpec> WithJacobianBounds(const ObjectiveSpec& spec,
                                                 JacobianBounds bounds);

// x -> f(x) + slope . x, with bounds shifted by `slope`.
ObjectiveSpec AddLinearTerm(const ObjectiveSpec& spec,
                            const Eigen::VectorXd& slope);

// A constraint evaluator; polynomial constraints get automatic bounds.
struct Constraint {
  ScalarField value;
  VectorField gradient;
  std::optional<Polynomial> polynomial;

  static Constraint FromPolynomial(const Polynomial& p);
};

// f + weight * (sum_k max(0, G_k)^2 + sum_k H_k^2), where each H_k already has
// its right-hand side subtracted. Bounds are recomputed when every constraint
// is polynomial; otherwise `caller_bounds` must be given.
absl::StatusOr<ObjectiveSpec> Penalize(
    const ObjectiveSpec& objective, std::span<const Constraint> inequalities,
    std::span<const Constraint> equalities, double weight,
    std::optional<JacobianBounds> caller_bounds = std::nullopt);

// The objectives of N agents over one shared domain X0.
class AgentProblem {
 public:
  static absl::StatusOr<AgentProblem> Create(
      std::vector<ObjectiveSpec> objectives);

  int size() const { return static_cast<int>(objectives_.size()); }
  int dim() const { return objectives_.front().dim(); }
  const Box& domain() const { return objectives_.front().domain(); }
  const ObjectiveSpec& objective(int i) const { return objectives_[i]; }
  const std::vector<ObjectiveSpec>& objectives() const { return objectives_; }

 private:
  explicit AgentProblem(std::vector<ObjectiveSpec> objectives)
      : objectives_(std::move(objectives)) {}

  std::vector<ObjectiveSpec> objectives_;
};

// Sum of all agents' objectives; bounds add componentwise.
absl::StatusOr<ObjectiveSpec> SumObjective(const AgentProblem& problem);

// out[k] = f(xs[k]) for a one-dimensional objective. Polynomial objectives go
// through the vectorized Horner kernel.
void EvaluateBatch(const ObjectiveSpec& spec, std::span<const double> xs,
                   std::span<double> out);

// Fixture format:
//   {"domain": {"lo": [...], "hi": [...]},
//    "objectives": [{"dim": n, "terms": [...],
//                    "jac_lo": [...], "jac_hi": [...]}]}
// "jac_lo"/"jac_hi" are optional overrides of the automatic bounds.
absl::StatusOr<AgentProblem> ProblemFromJson(const nlohmann::json& j);
nlohmann::json ProblemToJson(const AgentProblem& problem);

}  // namespace gpriv

#endif  // GPRIV_OBJECTIVE_H_
