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

#include <optional>
#include <span>
#include <string_view>

#include "gpriv/kernels/kernels.h"

namespace gpriv::kernels {
namespace {

std::optional<Isa>& Override() {
  static std::optional<Isa> isa;
  return isa;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

Isa DetectedIsa() {
#if defined(GPRIV_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__))
  static const Isa detected =
      __builtin_cpu_supports("avx2") ? Isa::kAvx2 : Isa::kScalar;
  return detected;
#else
  return Isa::kScalar;
#endif
}

Isa ActiveIsa() {
  if (const auto& forced = Override(); forced.has_value()) return *forced;
  return DetectedIsa();
}

ScopedIsaOverride::ScopedIsaOverride(Isa isa) : previous_(Override()) {
  Override() = (isa == Isa::kAvx2 && DetectedIsa() != Isa::kAvx2)
                   ? Isa::kScalar
                   : isa;
}

ScopedIsaOverride::~ScopedIsaOverride() { Override() = previous_; }

#if defined(GPRIV_HAVE_AVX2_KERNELS)
#define GPRIV_DISPATCH(fn, ...)                                          \
  return ActiveIsa() == Isa::kAvx2 ? avx2::fn(__VA_ARGS__)               \
                                   : scalar::fn(__VA_ARGS__)
#else
#define GPRIV_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void HornerBatch(std::span<const double> coeffs, std::span<const double> xs,
                 std::span<double> out) {
  GPRIV_DISPATCH(HornerBatch, coeffs, xs, out);
}

MinMax MinMaxReduce(std::span<const double> values) {
  GPRIV_DISPATCH(MinMaxReduce, values);
}

OutsideCount CountOutside(std::span<const double> values, double lo,
                          double hi) {
  GPRIV_DISPATCH(CountOutside, values, lo, hi);
}

#undef GPRIV_DISPATCH

}  // namespace gpriv::kernels
