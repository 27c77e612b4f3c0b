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

#include "gpriv/objective.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "gpriv/kernels/kernels.h"
#include "gpriv/status_macros.h"

namespace gpriv {

absl::StatusOr<ObjectiveSpec> ObjectiveSpec::Create(
    Box domain, ScalarField evaluate, VectorField gradient,
    JacobianBounds bounds, std::optional<Polynomial> polynomial) {
  const int n = domain.dim();
  if (!evaluate || !gradient) {
    return absl::InvalidArgumentError("objective needs evaluate and gradient");
  }
  if (bounds.lo.size() != n || bounds.hi.size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("Jacobian bounds must have length ", n));
  }
  if ((bounds.lo.array() > bounds.hi.array()).any()) {
    return absl::InvalidArgumentError("Jacobian bounds require lo <= hi");
  }
  if (!bounds.lo.allFinite() || !bounds.hi.allFinite()) {
    return absl::InvalidArgumentError("Jacobian bounds must be finite");
  }
  if (polynomial.has_value() && polynomial->dim() != n) {
    return absl::InvalidArgumentError("polynomial/domain dimension mismatch");
  }
  return ObjectiveSpec(std::move(domain), std::move(evaluate),
                       std::move(gradient), std::move(bounds),
                       std::move(polynomial));
}

JacobianBounds PolynomialJacobianBounds(const Polynomial& p, const Box& box) {
  JacobianBounds b{Eigen::VectorXd(p.dim()), Eigen::VectorXd(p.dim())};
  for (int j = 0; j < p.dim(); ++j) {
    const Interval r = p.Derivative(j).RangeBound(box);
    b.lo[j] = r.lo;
    b.hi[j] = r.hi;
  }
  return b;
}

absl::StatusOr<ObjectiveSpec> PolyToSpec(const Polynomial& p,
                                         const Box& domain) {
  if (p.dim() != domain.dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("polynomial has dimension ", p.dim(),
                     " but the domain has dimension ", domain.dim()));
  }
  return ObjectiveSpec::Create(
      domain, [p](const Eigen::VectorXd& x) { return p.Evaluate(x); },
      [p](const Eigen::VectorXd& x) { return p.Gradient(x); },
      PolynomialJacobianBounds(p, domain), p);
}

absl::StatusOr<ObjectiveSpec> WithJacobianBounds(const ObjectiveSpec& spec,
                                                 JacobianBounds bounds) {
  return ObjectiveSpec::Create(spec.domain(), spec.evaluator(),
                               spec.gradient_field(), std::move(bounds),
                               spec.polynomial());
}

ObjectiveSpec AddLinearTerm(const ObjectiveSpec& spec,
                            const Eigen::VectorXd& slope) {
  ScalarField f = spec.evaluator();
  VectorField g = spec.gradient_field();
  std::optional<Polynomial> poly;
  if (spec.polynomial()) {
    poly = *spec.polynomial() + Polynomial::Affine(slope, 0.0);
  }
  JacobianBounds bounds{spec.jac_lo() + slope, spec.jac_hi() + slope};
  return *ObjectiveSpec::Create(
      spec.domain(),
      [f, slope](const Eigen::VectorXd& x) { return f(x) + slope.dot(x); },
      [g, slope](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return g(x) + slope;
      },
      std::move(bounds), std::move(poly));
}

Constraint Constraint::FromPolynomial(const Polynomial& p) {
  return {[p](const Eigen::VectorXd& x) { return p.Evaluate(x); },
          [p](const Eigen::VectorXd& x) { return p.Gradient(x); }, p};
}

absl::StatusOr<ObjectiveSpec> Penalize(
    const ObjectiveSpec& objective, std::span<const Constraint> inequalities,
    std::span<const Constraint> equalities, double weight,
    std::optional<JacobianBounds> caller_bounds) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    return absl::InvalidArgumentError("penalty weight must be >= 0");
  }
  if (inequalities.empty() && equalities.empty()) return objective;

  const bool all_polynomial =
      std::all_of(inequalities.begin(), inequalities.end(),
                  [](const Constraint& c) { return c.polynomial.has_value(); }) &&
      std::all_of(equalities.begin(), equalities.end(),
                  [](const Constraint& c) { return c.polynomial.has_value(); });
  if (!all_polynomial && !caller_bounds.has_value()) {
    return absl::InvalidArgumentError(
        "non-polynomial constraint requires caller-supplied Jacobian bounds");
  }

  std::vector<Constraint> ineq(inequalities.begin(), inequalities.end());
  std::vector<Constraint> eq(equalities.begin(), equalities.end());
  ScalarField f = objective.evaluator();
  VectorField grad = objective.gradient_field();

  ScalarField value = [f, ineq, eq, weight](const Eigen::VectorXd& x) {
    double penalty = 0.0;
    for (const Constraint& c : ineq) {
      const double v = std::max(0.0, c.value(x));
      penalty += v * v;
    }
    for (const Constraint& c : eq) {
      const double v = c.value(x);
      penalty += v * v;
    }
    return f(x) + weight * penalty;
  };
  VectorField gradient = [grad, ineq, eq,
                          weight](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd g = grad(x);
    for (const Constraint& c : ineq) {
      const double v = std::max(0.0, c.value(x));
      if (v > 0.0) g += weight * 2.0 * v * c.gradient(x);
    }
    for (const Constraint& c : eq) g += weight * 2.0 * c.value(x) * c.gradient(x);
    return g;
  };

  if (caller_bounds.has_value()) {
    return ObjectiveSpec::Create(objective.domain(), std::move(value),
                                 std::move(gradient), *std::move(caller_bounds));
  }

  const Box& box = objective.domain();
  JacobianBounds bounds = objective.bounds();
  for (const Constraint& c : ineq) {
    // d/dx max(0, G)^2 = 2 max(0, G) dG/dx.
    const Interval range = c.polynomial->RangeBound(box);
    const Interval active{2.0 * weight * std::max(0.0, range.lo),
                          2.0 * weight * std::max(0.0, range.hi)};
    const JacobianBounds dg = PolynomialJacobianBounds(*c.polynomial, box);
    for (int j = 0; j < box.dim(); ++j) {
      const Interval term = Multiply(active, {dg.lo[j], dg.hi[j]});
      bounds.lo[j] += term.lo;
      bounds.hi[j] += term.hi;
    }
  }
  std::optional<Polynomial> poly;
  if (ineq.empty() && objective.polynomial().has_value()) {
    poly = *objective.polynomial();
    for (const Constraint& c : eq) {
      *poly = *poly + weight * (*c.polynomial * *c.polynomial);
    }
  }
  for (const Constraint& c : eq) {
    const JacobianBounds sq =
        PolynomialJacobianBounds(weight * (*c.polynomial * *c.polynomial), box);
    bounds.lo += sq.lo;
    bounds.hi += sq.hi;
  }
  return ObjectiveSpec::Create(box, std::move(value), std::move(gradient),
                               std::move(bounds), std::move(poly));
}

absl::StatusOr<AgentProblem> AgentProblem::Create(
    std::vector<ObjectiveSpec> objectives) {
  if (objectives.empty()) {
    return absl::InvalidArgumentError("problem needs at least one agent");
  }
  const Box& domain = objectives.front().domain();
  for (std::size_t i = 1; i < objectives.size(); ++i) {
    const Box& other = objectives[i].domain();
    if (other.dim() != domain.dim() || other.lo() != domain.lo() ||
        other.hi() != domain.hi()) {
      return absl::InvalidArgumentError(
          absl::StrCat("agent ", i, " does not share the problem domain"));
    }
  }
  return AgentProblem(std::move(objectives));
}

absl::StatusOr<ObjectiveSpec> SumObjective(const AgentProblem& problem) {
  if (problem.size() == 1) return problem.objective(0);
  std::vector<ScalarField> fs;
  std::vector<VectorField> gs;
  JacobianBounds bounds{Eigen::VectorXd::Zero(problem.dim()),
                        Eigen::VectorXd::Zero(problem.dim())};
  std::optional<Polynomial> poly = Polynomial::Zero(problem.dim());
  for (const ObjectiveSpec& s : problem.objectives()) {
    fs.push_back(s.evaluator());
    gs.push_back(s.gradient_field());
    bounds.lo += s.jac_lo();
    bounds.hi += s.jac_hi();
    if (poly && s.polynomial()) {
      *poly = *poly + *s.polynomial();
    } else {
      poly.reset();
    }
  }
  return ObjectiveSpec::Create(
      problem.domain(),
      [fs](const Eigen::VectorXd& x) {
        double sum = 0.0;
        for (const auto& f : fs) sum += f(x);
        return sum;
      },
      [gs, n = problem.dim()](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
        for (const auto& gi : gs) g += gi(x);
        return g;
      },
      std::move(bounds), std::move(poly));
}

void EvaluateBatch(const ObjectiveSpec& spec, std::span<const double> xs,
                   std::span<double> out) {
  if (spec.polynomial()) {
    if (auto coeffs = spec.polynomial()->UnivariateCoefficients()) {
      kernels::HornerBatch(*coeffs, xs, out);
      return;
    }
  }
  Eigen::VectorXd x(1);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    x[0] = xs[k];
    out[k] = spec.Evaluate(x);
  }
}

absl::StatusOr<AgentProblem> ProblemFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("domain") || !j.contains("objectives") ||
      !j.at("objectives").is_array()) {
    return absl::InvalidArgumentError(
        "problem must be {\"domain\": box, \"objectives\": [...]}");
  }
  GPRIV_ASSIGN_OR_RETURN(Box domain, BoxFromJson(j.at("domain")));
  std::vector<ObjectiveSpec> specs;
  for (const auto& item : j.at("objectives")) {
    GPRIV_ASSIGN_OR_RETURN(Polynomial p, PolynomialFromJson(item));
    GPRIV_ASSIGN_OR_RETURN(ObjectiveSpec spec, PolyToSpec(p, domain));
    if (item.contains("jac_lo") || item.contains("jac_hi")) {
      JacobianBounds bounds = spec.bounds();
      if (item.contains("jac_lo")) {
        GPRIV_ASSIGN_OR_RETURN(bounds.lo, VectorFromJson(item.at("jac_lo")));
      }
      if (item.contains("jac_hi")) {
        GPRIV_ASSIGN_OR_RETURN(bounds.hi, VectorFromJson(item.at("jac_hi")));
      }
      GPRIV_ASSIGN_OR_RETURN(spec, WithJacobianBounds(spec, std::move(bounds)));
    }
    specs.push_back(std::move(spec));
  }
  return AgentProblem::Create(std::move(specs));
}

nlohmann::json ProblemToJson(const AgentProblem& problem) {
  nlohmann::json objectives = nlohmann::json::array();
  for (const ObjectiveSpec& s : problem.objectives()) {
    nlohmann::json item = s.polynomial() ? PolynomialToJson(*s.polynomial())
                                         : nlohmann::json::object();
    item["jac_lo"] = VectorToJson(s.jac_lo());
    item["jac_hi"] = VectorToJson(s.jac_hi());
    objectives.push_back(std::move(item));
  }
  return {{"domain", BoxToJson(problem.domain())},
          {"objectives", std::move(objectives)}};
}

}  // namespace gpriv
