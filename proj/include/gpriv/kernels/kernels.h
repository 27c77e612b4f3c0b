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

#ifndef GPRIV_KERNELS_KERNELS_H_
#define GPRIV_KERNELS_KERNELS_H_

// Data-parallel inner loops used by the grid oracles and batch objective
// evaluation. Every kernel has a scalar reference implementation and, where
// the build and the host allow it, an AVX2 variant selected at runtime. The
// vector variants are bitwise-equivalent to the scalar ones: they use the same
// operation order and no fused multiply-add.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace gpriv::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

// Best instruction set supported by both this build and the running CPU.
Isa DetectedIsa();

// Instruction set the dispatching entry points currently use.
Isa ActiveIsa();

// Forces dispatch to `isa` for the lifetime of the object. Requests for an
// unavailable ISA fall back to scalar. Not thread-safe; meant for tests.
class ScopedIsaOverride {
 public:
  explicit ScopedIsaOverride(Isa isa);
  ~ScopedIsaOverride();
  ScopedIsaOverride(const ScopedIsaOverride&) = delete;
  ScopedIsaOverride& operator=(const ScopedIsaOverride&) = delete;

 private:
  std::optional<Isa> previous_;
};

struct MinMax {
  double min = 0.0;
  std::size_t argmin = 0;
  double max = 0.0;
  std::size_t argmax = 0;
};

// out[k] = sum_i coeffs[i] * xs[k]^i, evaluated by Horner's rule.
// `coeffs` is in ascending degree order and must be nonempty;
// out.size() == xs.size().
void HornerBatch(std::span<const double> coeffs, std::span<const double> xs,
                 std::span<double> out);

// Extremes of a nonempty NaN-free array; ties resolve to the first index.
MinMax MinMaxReduce(std::span<const double> values);

// Number of entries outside [lo, hi], and the first such index if any.
struct OutsideCount {
  std::size_t count = 0;
  std::optional<std::size_t> first;
};
OutsideCount CountOutside(std::span<const double> values, double lo,
                          double hi);

namespace scalar {
void HornerBatch(std::span<const double> coeffs, std::span<const double> xs,
                 std::span<double> out);
MinMax MinMaxReduce(std::span<const double> values);
OutsideCount CountOutside(std::span<const double> values, double lo,
                          double hi);
}  // namespace scalar

namespace avx2 {
// Only callable when DetectedIsa() == Isa::kAvx2.
void HornerBatch(std::span<const double> coeffs, std::span<const double> xs,
                 std::span<double> out);
MinMax MinMaxReduce(std::span<const double> values);
OutsideCount CountOutside(std::span<const double> values, double lo,
                          double hi);
}  // namespace avx2

}  // namespace gpriv::kernels

#endif  // GPRIV_KERNELS_KERNELS_H_
