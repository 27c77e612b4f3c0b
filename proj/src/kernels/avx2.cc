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

// Compiled with -mavx2 and without FMA so that every lane performs exactly the
// scalar operation sequence.

#include <immintrin.h>

#include <bit>
#include <cstddef>
#include <span>

#include "gpriv/kernels/kernels.h"

namespace gpriv::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

double HorizontalMin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

double HorizontalMax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

std::size_t FirstEqual(std::span<const double> values, double target) {
  const __m256d t = _mm256_set1_pd(target);
  const std::size_t n = values.size();
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d v = _mm256_loadu_pd(values.data() + k);
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(v, t, _CMP_EQ_OQ));
    if (mask != 0) return k + std::countr_zero(static_cast<unsigned>(mask));
  }
  for (; k < n; ++k) {
    if (values[k] == target) return k;
  }
  return 0;
}

}  // namespace

void HornerBatch(std::span<const double> coeffs, std::span<const double> xs,
                 std::span<double> out) {
  const std::size_t top = coeffs.size() - 1;
  const std::size_t n = xs.size();
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d x = _mm256_loadu_pd(xs.data() + k);
    __m256d acc = _mm256_set1_pd(coeffs[top]);
    for (std::size_t i = top; i-- > 0;) {
      acc = _mm256_add_pd(_mm256_mul_pd(acc, x), _mm256_set1_pd(coeffs[i]));
    }
    _mm256_storeu_pd(out.data() + k, acc);
  }
  if (k < n) scalar::HornerBatch(coeffs, xs.subspan(k), out.subspan(k));
}

MinMax MinMaxReduce(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < kLanes) return scalar::MinMaxReduce(values);
  __m256d vmin = _mm256_loadu_pd(values.data());
  __m256d vmax = vmin;
  std::size_t k = kLanes;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d v = _mm256_loadu_pd(values.data() + k);
    vmin = _mm256_min_pd(vmin, v);
    vmax = _mm256_max_pd(vmax, v);
  }
  double mn = HorizontalMin(vmin);
  double mx = HorizontalMax(vmax);
  for (; k < n; ++k) {
    if (values[k] < mn) mn = values[k];
    if (values[k] > mx) mx = values[k];
  }
  MinMax result;
  result.argmin = FirstEqual(values, mn);
  result.argmax = FirstEqual(values, mx);
  // Report the stored element so signed zeros match the scalar path.
  result.min = values[result.argmin];
  result.max = values[result.argmax];
  return result;
}

OutsideCount CountOutside(std::span<const double> values, double lo,
                          double hi) {
  OutsideCount result;
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  const std::size_t n = values.size();
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d v = _mm256_loadu_pd(values.data() + k);
    const __m256d out = _mm256_or_pd(_mm256_cmp_pd(v, vlo, _CMP_LT_OQ),
                                     _mm256_cmp_pd(v, vhi, _CMP_GT_OQ));
    const unsigned mask = static_cast<unsigned>(_mm256_movemask_pd(out));
    if (mask != 0) {
      if (!result.first) result.first = k + std::countr_zero(mask);
      result.count += std::popcount(mask);
    }
  }
  for (; k < n; ++k) {
    if (values[k] < lo || values[k] > hi) {
      if (!result.first) result.first = k;
      ++result.count;
    }
  }
  return result;
}

}  // namespace gpriv::kernels::avx2
