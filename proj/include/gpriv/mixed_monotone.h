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

#ifndef GPRIV_MIXED_MONOTONE_H_
#define GPRIV_MIXED_MONOTONE_H_

#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "gpriv/interval.h"
#include "gpriv/objective.h"

namespace gpriv {

inline constexpr int kDefaultVertexCap = 16;

// A corner of the Jacobian-bound hyper-rectangle: slope_j is either jac_lo_j
// (upper_j == false) or jac_hi_j (upper_j == true).
struct SlopeVertex {
  Eigen::VectorXd slope;
  std::vector<bool> upper;
};

// Every distinct vertex of [jac_lo, jac_hi]. Coordinates with jac_lo_j ==
// jac_hi_j contribute a single choice with upper_j == false. Enumeration order
// is by increasing bit mask over the free coordinates.
absl::StatusOr<std::vector<SlopeVertex>> EnumerateVertices(
    const ObjectiveSpec& spec, int cap = kDefaultVertexCap);

// Extremes of the remainder over a box.
struct RemainderExtrema {
  double min = 0.0;
  double max = 0.0;
  double width() const { return max - min; }
};

// f(x) = h(x) + slope . x with h sign-stable in every partial derivative over
// the spec's domain. The selector diagonal marks coordinates along which h is
// nondecreasing; those take the first argument of the decomposition function.
class JssDecomposition {
 public:
  static absl::StatusOr<JssDecomposition> Create(ObjectiveSpec spec,
                                                 SlopeVertex vertex);

  const ObjectiveSpec& base() const { return spec_; }
  const SlopeVertex& vertex() const { return vertex_; }
  const Eigen::VectorXd& slope() const { return vertex_.slope; }
  // Diagonal of the binary selector matrix.
  const std::vector<bool>& selector() const { return selector_; }

  // h(x) = f(x) - slope . x.
  double Remainder(const Eigen::VectorXd& x) const;

  // h(B x1 + (I - B) x2) for an ordered pair (x1 <= x2 or x2 <= x1).
  // With x1 = lo and x2 = hi of a box this is the remainder's minimum over
  // the box; with the arguments swapped it is the maximum.
  absl::StatusOr<double> DecompositionValue(const Eigen::VectorXd& x1,
                                            const Eigen::VectorXd& x2) const;

  absl::StatusOr<RemainderExtrema> Extrema(const Box& box) const;

  // Mixed-monotone inclusion of x -> f(x) + extra_slope . x over `box`.
  // An empty `extra_slope` means zero.
  absl::StatusOr<Interval> Inclusion(const Box& box,
                                     const Eigen::VectorXd& extra_slope) const;

  // Width of Inclusion(): extrema width + sum_j |slope_j + extra_j| width_j.
  absl::StatusOr<double> RangeWidth(const Box& box,
                                    const Eigen::VectorXd& extra_slope) const;

 private:
  JssDecomposition(ObjectiveSpec spec, SlopeVertex vertex,
                   std::vector<bool> selector)
      : spec_(std::move(spec)),
        vertex_(std::move(vertex)),
        selector_(std::move(selector)) {}

  absl::Status CheckInDomain(const Box& box) const;
  Eigen::VectorXd EffectiveSlope(const Eigen::VectorXd& extra) const;

  ObjectiveSpec spec_;
  SlopeVertex vertex_;
  std::vector<bool> selector_;
};

}  // namespace gpriv

#endif  // GPRIV_MIXED_MONOTONE_H_
