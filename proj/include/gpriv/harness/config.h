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

#ifndef GPRIV_HARNESS_CONFIG_H_
#define GPRIV_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "gpriv/dist_opt.h"
#include "gpriv/objective.h"
#include "nlohmann/json.hpp"

namespace gpriv::harness {

// JSON text of a fixture compiled into the binary, by file stem.
std::optional<std::string_view> BundledFixture(std::string_view name);
std::vector<std::string_view> BundledFixtureNames();

struct SamplingConfig {
  int sample_count = 50;
  double sigma = 1.0;
  uint64_t seed = 0;
};

struct SolverConfig {
  std::vector<Algorithm> algorithms = {Algorithm::kDgd,
                                       Algorithm::kGradientTracking,
                                       Algorithm::kZerothOrder};
  AlgorithmConfig base;
  int starts = 5;
  std::string graph = "complete";  // complete | path
};

struct VerifyConfig {
  int pairs = 100;
  std::vector<std::string> properties = {"privacy", "soundness", "tightness"};
  int soundness_boxes = 20;
  int soundness_points = 10000;
  int tightness_grid = 100000;
};

struct ReferenceValues {
  std::vector<double> slopes;
  std::vector<double> eps;
};

struct ExperimentConfig {
  std::string problem_source;
  std::optional<AgentProblem> problem;
  std::optional<std::vector<Eigen::VectorXd>> slopes;
  std::optional<std::vector<double>> deltas;
  std::optional<double> slope_floor;
  ReferenceValues reference;
  SamplingConfig sampling;
  SolverConfig solvers;
  VerifyConfig verify;
  int grid_points = 0;
  std::filesystem::path output_dir = "gpriv_out";
  bool trace = false;
};

// `base_dir` resolves relative fixture paths. The "problem" entry is a path,
// "bundled:<name>", or an inline problem object.
absl::StatusOr<ExperimentConfig> ParseConfig(
    const nlohmann::json& j, const std::filesystem::path& base_dir);
absl::StatusOr<ExperimentConfig> LoadConfigFile(
    const std::filesystem::path& path);
absl::StatusOr<ExperimentConfig> BundledExampleConfig();

absl::StatusOr<nlohmann::json> ReadJsonFile(const std::filesystem::path& path);

}  // namespace gpriv::harness

#endif  // GPRIV_HARNESS_CONFIG_H_
