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

#include <cstddef>
#include <span>

#include "gpriv/kernels/kernels.h"

namespace gpriv::kernels::scalar {

void HornerBatch(std::span<const double> coeffs, std::span<const double> xs,
                 std::span<double> out) {
  const std::size_t top = coeffs.size() - 1;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = xs[k];
    double acc = coeffs[top];
    for (std::size_t i = top; i-- > 0;) acc = acc * x + coeffs[i];
    out[k] = acc;
  }
}

MinMax MinMaxReduce(std::span<const double> values) {
  MinMax result{values[0], 0, values[0], 0};
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] < result.min) {
      result.min = values[k];
      result.argmin = k;
    }
    if (values[k] > result.max) {
      result.max = values[k];
      result.argmax = k;
    }
  }
  return result;
}

OutsideCount CountOutside(std::span<const double> values, double lo,
                          double hi) {
  OutsideCount result;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] < lo || values[k] > hi) {
      if (!result.first) result.first = k;
      ++result.count;
    }
  }
  return result;
}

}  // namespace gpriv::kernels::scalar
