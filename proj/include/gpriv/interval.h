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

#ifndef GPRIV_INTERVAL_H_
#define GPRIV_INTERVAL_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"

namespace gpriv {

// A closed scalar interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double Width() const { return hi - lo; }
  bool Contains(double x) const { return lo <= x && x <= hi; }
  bool Contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Interval product, exact in real arithmetic (no outward rounding).
Interval Multiply(const Interval& a, const Interval& b);
// Range of x^power over `base`; power >= 0.
Interval Power(const Interval& base, int power);

// An n-dimensional hyper-interval {x : lo <= x <= hi}, n >= 1. This is the
// domain-side type; see IntervalVector for values in R^N.
class Box {
 public:
  static absl::StatusOr<Box> Create(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Box Singleton(const Eigen::VectorXd& point);

  int dim() const { return static_cast<int>(lo_.size()); }
  const Eigen::VectorXd& lo() const { return lo_; }
  const Eigen::VectorXd& hi() const { return hi_; }
  Interval axis(int j) const { return {lo_[j], hi_[j]}; }

  // Per-component width hi - lo.
  Eigen::VectorXd Widths() const { return hi_ - lo_; }
  bool IsSingleton() const { return (lo_.array() == hi_.array()).all(); }
  bool ContainsPoint(const Eigen::VectorXd& x) const;
  // Clamps every coordinate of x into the box.
  Eigen::VectorXd Project(const Eigen::VectorXd& x) const;
  // The vertex taking hi_j where bit j of `mask` is set and lo_j otherwise.
  Eigen::VectorXd Vertex(uint64_t mask) const;

 private:
  Box(Eigen::VectorXd lo, Eigen::VectorXd hi)
      : lo_(std::move(lo)), hi_(std::move(hi)) {}

  Eigen::VectorXd lo_;
  Eigen::VectorXd hi_;
};

// max_j (hi_j - lo_j); zero iff the box is a singleton.
double Diameter(const Box& box);

// True iff outer.lo <= inner.lo and inner.hi <= outer.hi componentwise.
absl::StatusOr<bool> Contains(const Box& outer, const Box& inner);

// `count` sub-boxes of `box`, deterministic in `seed`. The first is the box
// itself and the second (when count >= 2) a singleton.
std::vector<Box> SampleSubintervals(const Box& box, int count, uint64_t seed);

// An ordered list of N scalar intervals: the codomain-side type.
class IntervalVector {
 public:
  IntervalVector() = default;
  static absl::StatusOr<IntervalVector> Create(std::vector<Interval> entries);

  int size() const { return static_cast<int>(entries_.size()); }
  const Interval& operator[](int i) const { return entries_[i]; }
  const std::vector<Interval>& entries() const { return entries_; }
  bool Contains(const IntervalVector& other) const;

 private:
  explicit IntervalVector(std::vector<Interval> entries)
      : entries_(std::move(entries)) {}

  std::vector<Interval> entries_;
};

// Largest entry width.
double Diameter(const IntervalVector& v);

// Componentwise intersection; std::nullopt marks the empty set.
absl::StatusOr<std::optional<IntervalVector>> Intersect(
    const IntervalVector& a, const IntervalVector& b);

// Diameter with diam(empty) = 0.
double Diameter(const std::optional<IntervalVector>& v);

nlohmann::json BoxToJson(const Box& box);
absl::StatusOr<Box> BoxFromJson(const nlohmann::json& j);
nlohmann::json IntervalVectorToJson(const IntervalVector& v);

// Small JSON helpers shared by the serializers.
nlohmann::json VectorToJson(const Eigen::VectorXd& v);
absl::StatusOr<Eigen::VectorXd> VectorFromJson(const nlohmann::json& j);

}  // namespace gpriv

#endif  // GPRIV_INTERVAL_H_
