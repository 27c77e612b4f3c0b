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

#ifndef GPRIV_POLYNOMIAL_H_
#define GPRIV_POLYNOMIAL_H_

#include <optional>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "gpriv/interval.h"
#include "nlohmann/json.hpp"

namespace gpriv {

struct Monomial {
  double coefficient = 0.0;
  std::vector<int> exponents;
};

// A multivariate polynomial in canonical form: terms with equal exponent
// vectors are merged, zero terms dropped, and terms sorted by exponents.
class Polynomial {
 public:
  static absl::StatusOr<Polynomial> Create(int dim,
                                           std::vector<Monomial> terms);
  static Polynomial Zero(int dim);
  // slope . x + offset.
  static Polynomial Affine(const Eigen::VectorXd& slope, double offset);

  int dim() const { return dim_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  int Degree() const;
  bool IsAffine() const { return Degree() <= 1; }

  double Evaluate(const Eigen::VectorXd& x) const;
  Eigen::VectorXd Gradient(const Eigen::VectorXd& x) const;
  Polynomial Derivative(int j) const;

  // Sound enclosure of the range over `box`, composed monomial by monomial
  // with interval multiplication. Not tight in general.
  Interval RangeBound(const Box& box) const;

  // Dense ascending coefficients; only for dim() == 1.
  std::optional<std::vector<double>> UnivariateCoefficients() const;

  // Coefficient of x_j^1 (all other exponents zero) and the constant term.
  Eigen::VectorXd LinearPart() const;
  double ConstantTerm() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  Polynomial(int dim, std::vector<Monomial> terms)
      : dim_(dim), terms_(std::move(terms)) {}
  static Polynomial Canonical(int dim, std::vector<Monomial> terms);

  int dim_ = 1;
  std::vector<Monomial> terms_;
};

// {"dim": n, "terms": [{"c": coefficient, "e": [exponents]}]}
nlohmann::json PolynomialToJson(const Polynomial& p);
absl::StatusOr<Polynomial> PolynomialFromJson(const nlohmann::json& j);

}  // namespace gpriv

#endif  // GPRIV_POLYNOMIAL_H_
