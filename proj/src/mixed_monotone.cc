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

#include "gpriv/mixed_monotone.h"

#include <cstdint>
#include <utility>

#include "absl/strings/str_cat.h"
#include "gpriv/status_macros.h"

namespace gpriv {

absl::StatusOr<std::vector<SlopeVertex>> EnumerateVertices(
    const ObjectiveSpec& spec, int cap) {
  const int n = spec.dim();
  if (n > cap) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "vertex enumeration is capped at n <= ", cap, " (got n = ", n, ")"));
  }
  std::vector<int> free_axes;
  for (int j = 0; j < n; ++j) {
    if (spec.jac_lo()[j] != spec.jac_hi()[j]) free_axes.push_back(j);
  }
  const uint64_t count = uint64_t{1} << free_axes.size();
  std::vector<SlopeVertex> out;
  out.reserve(count);
  for (uint64_t mask = 0; mask < count; ++mask) {
    SlopeVertex v{spec.jac_lo(), std::vector<bool>(n, false)};
    for (std::size_t k = 0; k < free_axes.size(); ++k) {
      if (((mask >> k) & 1u) == 0) continue;
      const int j = free_axes[k];
      v.slope[j] = spec.jac_hi()[j];
      v.upper[j] = true;
    }
    out.push_back(std::move(v));
  }
  return out;
}

absl::StatusOr<JssDecomposition> JssDecomposition::Create(ObjectiveSpec spec,
                                                          SlopeVertex vertex) {
  const int n = spec.dim();
  if (vertex.slope.size() != n || static_cast<int>(vertex.upper.size()) != n) {
    return absl::InvalidArgumentError("slope vertex dimension mismatch");
  }
  std::vector<bool> selector(n);
  for (int j = 0; j < n; ++j) {
    const double expected =
        vertex.upper[j] ? spec.jac_hi()[j] : spec.jac_lo()[j];
    if (vertex.slope[j] != expected) {
      return absl::InvalidArgumentError(absl::StrCat(
          "slope vertex coordinate ", j, " is not the selected Jacobian bound"));
    }
    // Slope at the lower bound leaves the remainder's partial >= 0.
    selector[j] = !vertex.upper[j];
  }
  return JssDecomposition(std::move(spec), std::move(vertex),
                          std::move(selector));
}

double JssDecomposition::Remainder(const Eigen::VectorXd& x) const {
  return spec_.Evaluate(x) - vertex_.slope.dot(x);
}

absl::StatusOr<double> JssDecomposition::DecompositionValue(
    const Eigen::VectorXd& x1, const Eigen::VectorXd& x2) const {
  const int n = spec_.dim();
  if (x1.size() != n || x2.size() != n) {
    return absl::InvalidArgumentError("decomposition argument dimension");
  }
  const bool forward = (x1.array() <= x2.array()).all();
  const bool backward = (x2.array() <= x1.array()).all();
  if (!forward && !backward) {
    return absl::InvalidArgumentError(
        "decomposition function needs ordered arguments (x1 <= x2 or x2 <= "
        "x1)");
  }
  Eigen::VectorXd corner(n);
  for (int j = 0; j < n; ++j) corner[j] = selector_[j] ? x1[j] : x2[j];
  return Remainder(corner);
}

absl::Status JssDecomposition::CheckInDomain(const Box& box) const {
  GPRIV_ASSIGN_OR_RETURN(const bool inside, Contains(spec_.domain(), box));
  if (!inside) {
    return absl::InvalidArgumentError(
        "query box is not contained in the objective's domain");
  }
  return absl::OkStatus();
}

absl::StatusOr<RemainderExtrema> JssDecomposition::Extrema(
    const Box& box) const {
  GPRIV_RETURN_IF_ERROR(CheckInDomain(box));
  GPRIV_ASSIGN_OR_RETURN(const double lo,
                         DecompositionValue(box.lo(), box.hi()));
  GPRIV_ASSIGN_OR_RETURN(const double hi,
                         DecompositionValue(box.hi(), box.lo()));
  return RemainderExtrema{lo, hi};
}

Eigen::VectorXd JssDecomposition::EffectiveSlope(
    const Eigen::VectorXd& extra) const {
  if (extra.size() == 0) return vertex_.slope;
  return vertex_.slope + extra;
}

absl::StatusOr<Interval> JssDecomposition::Inclusion(
    const Box& box, const Eigen::VectorXd& extra_slope) const {
  if (extra_slope.size() != 0 && extra_slope.size() != spec_.dim()) {
    return absl::InvalidArgumentError("extra slope dimension mismatch");
  }
  GPRIV_ASSIGN_OR_RETURN(const RemainderExtrema h, Extrema(box));
  const Eigen::VectorXd m = EffectiveSlope(extra_slope);
  const Eigen::VectorXd pos = m.cwiseMax(0.0);
  const Eigen::VectorXd neg = pos - m;
  return Interval{h.min + pos.dot(box.lo()) - neg.dot(box.hi()),
                  h.max + pos.dot(box.hi()) - neg.dot(box.lo())};
}

absl::StatusOr<double> JssDecomposition::RangeWidth(
    const Box& box, const Eigen::VectorXd& extra_slope) const {
  GPRIV_ASSIGN_OR_RETURN(const Interval range, Inclusion(box, extra_slope));
  return range.Width();
}

}  // namespace gpriv
