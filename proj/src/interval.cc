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

#include "gpriv/interval.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "gpriv/random.h"

namespace gpriv {

Interval Multiply(const Interval& a, const Interval& b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

Interval Power(const Interval& base, int power) {
  if (power == 0) return {1.0, 1.0};
  auto ipow = [power](double x) {
    double r = 1.0;
    for (int k = 0; k < power; ++k) r *= x;
    return r;
  };
  const double a = ipow(base.lo);
  const double b = ipow(base.hi);
  if (power % 2 == 1) return {a, b};
  if (base.lo <= 0.0 && 0.0 <= base.hi) return {0.0, std::max(a, b)};
  return {std::min(a, b), std::max(a, b)};
}

absl::StatusOr<Box> Box::Create(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() < 1) {
    return absl::InvalidArgumentError("Box dimension must be at least 1");
  }
  if (lo.size() != hi.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Box bounds differ in length: ", lo.size(), " vs ", hi.size()));
  }
  for (Eigen::Index j = 0; j < lo.size(); ++j) {
    if (!std::isfinite(lo[j]) || !std::isfinite(hi[j])) {
      return absl::InvalidArgumentError("Box bounds must be finite");
    }
    if (lo[j] > hi[j]) {
      return absl::InvalidArgumentError(
          absl::StrCat("Box lower bound exceeds upper bound at coordinate ",
                       j, ": ", lo[j], " > ", hi[j]));
    }
  }
  return Box(std::move(lo), std::move(hi));
}

Box Box::Singleton(const Eigen::VectorXd& point) { return Box(point, point); }

bool Box::ContainsPoint(const Eigen::VectorXd& x) const {
  return x.size() == lo_.size() && (lo_.array() <= x.array()).all() &&
         (x.array() <= hi_.array()).all();
}

Eigen::VectorXd Box::Project(const Eigen::VectorXd& x) const {
  return x.cwiseMax(lo_).cwiseMin(hi_);
}

Eigen::VectorXd Box::Vertex(uint64_t mask) const {
  Eigen::VectorXd v(lo_.size());
  for (Eigen::Index j = 0; j < lo_.size(); ++j) {
    v[j] = ((mask >> j) & 1u) != 0 ? hi_[j] : lo_[j];
  }
  return v;
}

double Diameter(const Box& box) { return box.Widths().maxCoeff(); }

absl::StatusOr<bool> Contains(const Box& outer, const Box& inner) {
  if (outer.dim() != inner.dim()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Contains: dimension mismatch ", outer.dim(), " vs ", inner.dim()));
  }
  return (outer.lo().array() <= inner.lo().array()).all() &&
         (inner.hi().array() <= outer.hi().array()).all();
}

std::vector<Box> SampleSubintervals(const Box& box, int count, uint64_t seed) {
  std::vector<Box> out;
  if (count < 1) return out;
  out.reserve(count);
  out.push_back(box);
  Rng rng(seed);
  const int n = box.dim();
  auto draw = [&](int j) {
    return std::clamp(rng.Uniform(box.lo()[j], box.hi()[j]), box.lo()[j],
                      box.hi()[j]);
  };
  if (count >= 2) {
    Eigen::VectorXd point(n);
    for (int j = 0; j < n; ++j) point[j] = draw(j);
    out.push_back(Box::Singleton(point));
  }
  while (static_cast<int>(out.size()) < count) {
    Eigen::VectorXd lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
      const double a = draw(j);
      const double b = draw(j);
      lo[j] = std::min(a, b);
      hi[j] = std::max(a, b);
    }
    out.push_back(*Box::Create(std::move(lo), std::move(hi)));
  }
  return out;
}

absl::StatusOr<IntervalVector> IntervalVector::Create(
    std::vector<Interval> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].lo <= entries[i].hi)) {
      return absl::InvalidArgumentError(
          absl::StrCat("IntervalVector entry ", i, " has lo > hi"));
    }
  }
  return IntervalVector(std::move(entries));
}

bool IntervalVector::Contains(const IntervalVector& other) const {
  if (other.size() != size()) return false;
  for (int i = 0; i < size(); ++i) {
    if (!entries_[i].Contains(other[i])) return false;
  }
  return true;
}

double Diameter(const IntervalVector& v) {
  double d = 0.0;
  for (const Interval& e : v.entries()) d = std::max(d, e.Width());
  return d;
}

absl::StatusOr<std::optional<IntervalVector>> Intersect(
    const IntervalVector& a, const IntervalVector& b) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Intersect: length mismatch ", a.size(), " vs ", b.size()));
  }
  std::vector<Interval> entries;
  entries.reserve(a.size());
  for (int i = 0; i < a.size(); ++i) {
    const double lo = std::max(a[i].lo, b[i].lo);
    const double hi = std::min(a[i].hi, b[i].hi);
    if (lo > hi) return std::optional<IntervalVector>();
    entries.push_back({lo, hi});
  }
  return std::optional<IntervalVector>(
      *IntervalVector::Create(std::move(entries)));
}

double Diameter(const std::optional<IntervalVector>& v) {
  return v.has_value() ? Diameter(*v) : 0.0;
}

nlohmann::json VectorToJson(const Eigen::VectorXd& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

absl::StatusOr<Eigen::VectorXd> VectorFromJson(const nlohmann::json& j) {
  if (!j.is_array()) {
    return absl::InvalidArgumentError("expected a JSON array of numbers");
  }
  Eigen::VectorXd v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) {
      return absl::InvalidArgumentError("expected a JSON array of numbers");
    }
    v[k] = j[k].get<double>();
  }
  return v;
}

nlohmann::json BoxToJson(const Box& box) {
  return {{"lo", VectorToJson(box.lo())}, {"hi", VectorToJson(box.hi())}};
}

absl::StatusOr<Box> BoxFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi")) {
    return absl::InvalidArgumentError(
        "box must be an object with \"lo\" and \"hi\"");
  }
  auto lo = VectorFromJson(j.at("lo"));
  if (!lo.ok()) return lo.status();
  auto hi = VectorFromJson(j.at("hi"));
  if (!hi.ok()) return hi.status();
  return Box::Create(*std::move(lo), *std::move(hi));
}

nlohmann::json IntervalVectorToJson(const IntervalVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const Interval& e : v.entries()) out.push_back({e.lo, e.hi});
  return out;
}

}  // namespace gpriv
