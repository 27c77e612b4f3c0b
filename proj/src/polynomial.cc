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

#include "gpriv/polynomial.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "absl/strings/str_cat.h"

namespace gpriv {
namespace {

double IntPow(double x, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= x;
  return r;
}

}  // namespace

Polynomial Polynomial::Canonical(int dim, std::vector<Monomial> terms) {
  std::map<std::vector<int>, double> merged;
  for (Monomial& t : terms) merged[std::move(t.exponents)] += t.coefficient;
  std::vector<Monomial> out;
  for (auto& [exponents, c] : merged) {
    if (c != 0.0) out.push_back({c, exponents});
  }
  return Polynomial(dim, std::move(out));
}

absl::StatusOr<Polynomial> Polynomial::Create(int dim,
                                              std::vector<Monomial> terms) {
  if (dim < 1) {
    return absl::InvalidArgumentError("polynomial dimension must be >= 1");
  }
  for (const Monomial& t : terms) {
    if (static_cast<int>(t.exponents.size()) != dim) {
      return absl::InvalidArgumentError(
          absl::StrCat("monomial has ", t.exponents.size(),
                       " exponents, polynomial dimension is ", dim));
    }
    if (std::any_of(t.exponents.begin(), t.exponents.end(),
                    [](int e) { return e < 0; })) {
      return absl::InvalidArgumentError("monomial exponents must be >= 0");
    }
    if (!std::isfinite(t.coefficient)) {
      return absl::InvalidArgumentError("monomial coefficient not finite");
    }
  }
  return Canonical(dim, std::move(terms));
}

Polynomial Polynomial::Zero(int dim) { return Polynomial(dim, {}); }

Polynomial Polynomial::Affine(const Eigen::VectorXd& slope, double offset) {
  const int n = static_cast<int>(slope.size());
  std::vector<Monomial> terms;
  terms.push_back({offset, std::vector<int>(n, 0)});
  for (int j = 0; j < n; ++j) {
    std::vector<int> e(n, 0);
    e[j] = 1;
    terms.push_back({slope[j], std::move(e)});
  }
  return Canonical(n, std::move(terms));
}

int Polynomial::Degree() const {
  int degree = 0;
  for (const Monomial& t : terms_) {
    int d = 0;
    for (int e : t.exponents) d += e;
    degree = std::max(degree, d);
  }
  return degree;
}

double Polynomial::Evaluate(const Eigen::VectorXd& x) const {
  double sum = 0.0;
  for (const Monomial& t : terms_) {
    double v = t.coefficient;
    for (int j = 0; j < dim_; ++j) v *= IntPow(x[j], t.exponents[j]);
    sum += v;
  }
  return sum;
}

Eigen::VectorXd Polynomial::Gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
  for (const Monomial& t : terms_) {
    for (int j = 0; j < dim_; ++j) {
      if (t.exponents[j] == 0) continue;
      double v = t.coefficient * t.exponents[j];
      for (int k = 0; k < dim_; ++k) {
        v *= IntPow(x[k], k == j ? t.exponents[k] - 1 : t.exponents[k]);
      }
      g[j] += v;
    }
  }
  return g;
}

Polynomial Polynomial::Derivative(int j) const {
  std::vector<Monomial> out;
  for (const Monomial& t : terms_) {
    if (t.exponents[j] == 0) continue;
    Monomial d{t.coefficient * t.exponents[j], t.exponents};
    --d.exponents[j];
    out.push_back(std::move(d));
  }
  return Canonical(dim_, std::move(out));
}

Interval Polynomial::RangeBound(const Box& box) const {
  Interval sum{0.0, 0.0};
  for (const Monomial& t : terms_) {
    Interval term{t.coefficient, t.coefficient};
    for (int j = 0; j < dim_; ++j) {
      if (t.exponents[j] == 0) continue;
      term = Multiply(term, Power(box.axis(j), t.exponents[j]));
    }
    sum.lo += term.lo;
    sum.hi += term.hi;
  }
  return sum;
}

std::optional<std::vector<double>> Polynomial::UnivariateCoefficients() const {
  if (dim_ != 1) return std::nullopt;
  std::vector<double> coeffs(Degree() + 1, 0.0);
  for (const Monomial& t : terms_) coeffs[t.exponents[0]] += t.coefficient;
  return coeffs;
}

Eigen::VectorXd Polynomial::LinearPart() const {
  Eigen::VectorXd slope = Eigen::VectorXd::Zero(dim_);
  for (const Monomial& t : terms_) {
    int total = 0, axis = -1;
    for (int j = 0; j < dim_; ++j) {
      total += t.exponents[j];
      if (t.exponents[j] == 1) axis = j;
    }
    if (total == 1) slope[axis] += t.coefficient;
  }
  return slope;
}

double Polynomial::ConstantTerm() const {
  for (const Monomial& t : terms_) {
    if (std::all_of(t.exponents.begin(), t.exponents.end(),
                    [](int e) { return e == 0; })) {
      return t.coefficient;
    }
  }
  return 0.0;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Monomial> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return Polynomial::Canonical(a.dim_, std::move(terms));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<Monomial> terms = p.terms_;
  for (Monomial& t : terms) t.coefficient *= s;
  return Polynomial::Canonical(p.dim_, std::move(terms));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return a + (-1.0) * b;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<Monomial> terms;
  for (const Monomial& s : a.terms_) {
    for (const Monomial& t : b.terms_) {
      Monomial m{s.coefficient * t.coefficient, s.exponents};
      for (int j = 0; j < a.dim_; ++j) m.exponents[j] += t.exponents[j];
      terms.push_back(std::move(m));
    }
  }
  return Polynomial::Canonical(a.dim_, std::move(terms));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (a.terms_[k].coefficient != b.terms_[k].coefficient ||
        a.terms_[k].exponents != b.terms_[k].exponents) {
      return false;
    }
  }
  return true;
}

nlohmann::json PolynomialToJson(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const Monomial& t : p.terms()) {
    terms.push_back({{"c", t.coefficient}, {"e", t.exponents}});
  }
  return {{"dim", p.dim()}, {"terms", std::move(terms)}};
}

absl::StatusOr<Polynomial> PolynomialFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("terms") ||
      !j.at("dim").is_number_integer() || !j.at("terms").is_array()) {
    return absl::InvalidArgumentError(
        "polynomial must be {\"dim\": n, \"terms\": [...]}");
  }
  std::vector<Monomial> terms;
  for (const auto& t : j.at("terms")) {
    if (!t.is_object() || !t.contains("c") || !t.contains("e") ||
        !t.at("c").is_number() || !t.at("e").is_array()) {
      return absl::InvalidArgumentError(
          "polynomial term must be {\"c\": number, \"e\": [ints]}");
    }
    Monomial m{t.at("c").get<double>(), {}};
    for (const auto& e : t.at("e")) {
      if (!e.is_number_integer()) {
        return absl::InvalidArgumentError("exponents must be integers");
      }
      m.exponents.push_back(e.get<int>());
    }
    terms.push_back(std::move(m));
  }
  return Polynomial::Create(j.at("dim").get<int>(), std::move(terms));
}

}  // namespace gpriv
