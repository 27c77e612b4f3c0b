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

#ifndef GPRIV_RANDOM_H_
#define GPRIV_RANDOM_H_

#include <cstdint>
#include <optional>
#include <random>

namespace gpriv {

// Seeded generator whose output is identical on every platform. The engine
// is std::mt19937_64 (fully specified by the standard); all derived draws are
// computed here rather than through <random> distributions, whose algorithms
// are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Box-Muller; the second variate of each pair is cached.
  double Normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace gpriv

#endif  // GPRIV_RANDOM_H_
