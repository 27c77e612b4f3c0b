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

#include "gpriv/kernels/kernels.h"

#include <cstring>
#include <vector>

#include "gtest/gtest.h"
#include "gpriv/random.h"

namespace gpriv::kernels {
namespace {

std::vector<double> RandomValues(int n, uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform(lo, hi);
  return v;
}

bool BitwiseEqual(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

class KernelEquivalenceTest : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    if (DetectedIsa() != Isa::kAvx2) GTEST_SKIP() << "no AVX2 on this host";
  }
};

TEST_P(KernelEquivalenceTest, Horner) {
  const int n = GetParam();
  const std::vector<double> xs = RandomValues(n, 1 + n, -10, 10);
  for (const std::vector<double>& coeffs :
       {std::vector<double>{3.0}, std::vector<double>{0, -32, -16, 2, 1},
        RandomValues(9, 77, -5, 5)}) {
    std::vector<double> ref(n), vec(n);
    {
      ScopedIsaOverride o(Isa::kScalar);
      HornerBatch(coeffs, xs, ref);
    }
    {
      ScopedIsaOverride o(Isa::kAvx2);
      ASSERT_EQ(ActiveIsa(), Isa::kAvx2);
      HornerBatch(coeffs, xs, vec);
    }
    EXPECT_TRUE(BitwiseEqual(ref, vec));
  }
}

TEST_P(KernelEquivalenceTest, MinMax) {
  const int n = GetParam();
  if (n == 0) return;
  std::vector<double> v = RandomValues(n, 5 + n, -1, 1);
  // Plant ties so first-index resolution is exercised.
  if (n > 8) {
    v[n - 1] = v[2] = 7.0;
    v[n - 2] = v[3] = -7.0;
  }
  MinMax ref, vec;
  {
    ScopedIsaOverride o(Isa::kScalar);
    ref = MinMaxReduce(v);
  }
  {
    ScopedIsaOverride o(Isa::kAvx2);
    vec = MinMaxReduce(v);
  }
  EXPECT_EQ(ref.min, vec.min);
  EXPECT_EQ(ref.max, vec.max);
  EXPECT_EQ(ref.argmin, vec.argmin);
  EXPECT_EQ(ref.argmax, vec.argmax);
}

TEST_P(KernelEquivalenceTest, CountOutside) {
  const int n = GetParam();
  const std::vector<double> v = RandomValues(n, 9 + n, -2, 2);
  OutsideCount ref, vec;
  {
    ScopedIsaOverride o(Isa::kScalar);
    ref = CountOutside(v, -1.5, 1.0);
  }
  {
    ScopedIsaOverride o(Isa::kAvx2);
    vec = CountOutside(v, -1.5, 1.0);
  }
  EXPECT_EQ(ref.count, vec.count);
  EXPECT_EQ(ref.first, vec.first);
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelEquivalenceTest,
                         ::testing::Values(0, 1, 3, 4, 5, 7, 8, 17, 1000, 100003));

TEST(ScalarKernelTest, HornerMatchesDirectEvaluation) {
  const std::vector<double> coeffs = {1.0, -2.0, 0.5};
  const std::vector<double> xs = {0.0, 1.0, 2.0, -4.0};
  std::vector<double> out(xs.size());
  scalar::HornerBatch(coeffs, xs, out);
  EXPECT_EQ(out, (std::vector<double>{1.0, -0.5, -1.0, 17.0}));
}

TEST(ScalarKernelTest, MinMaxTiesResolveToFirstIndex) {
  const std::vector<double> v = {2.0, -1.0, 2.0, -1.0};
  const MinMax m = scalar::MinMaxReduce(v);
  EXPECT_EQ(m.min, -1.0);
  EXPECT_EQ(m.argmin, 1u);
  EXPECT_EQ(m.max, 2.0);
  EXPECT_EQ(m.argmax, 0u);
}

TEST(ScalarKernelTest, CountOutsideBoundaryIsInside) {
  const std::vector<double> v = {0.0, 1.0, 1.0000001, -3.0};
  const OutsideCount c = scalar::CountOutside(v, 0.0, 1.0);
  EXPECT_EQ(c.count, 2u);
  EXPECT_EQ(c.first, 2u);
  EXPECT_EQ(scalar::CountOutside({}, 0, 1).count, 0u);
  EXPECT_FALSE(scalar::CountOutside(v, -5, 5).first.has_value());
}

TEST(DispatchTest, OverrideRestores) {
  const Isa before = ActiveIsa();
  {
    ScopedIsaOverride o(Isa::kScalar);
    EXPECT_EQ(ActiveIsa(), Isa::kScalar);
  }
  EXPECT_EQ(ActiveIsa(), before);
  EXPECT_EQ(IsaName(Isa::kScalar), "scalar");
}

}  // namespace
}  // namespace gpriv::kernels
