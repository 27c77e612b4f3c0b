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

#ifndef GPRIV_HARNESS_COMMANDS_H_
#define GPRIV_HARNESS_COMMANDS_H_

#include <map>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gpriv/dist_opt.h"
#include "gpriv/harness/config.h"
#include "gpriv/objective.h"
#include "gpriv/privacy.h"
#include "nlohmann/json.hpp"

namespace gpriv::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// Usage-type errors map to 2, solver and numerical failures to 3.
int ExitCodeFor(const absl::Status& status);

struct CommandOutcome {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::string text;  // human-readable summary
};

// Slope overrides from the config, else the floored design slopes.
absl::StatusOr<std::vector<Eigen::VectorXd>> ResolveSlopes(
    const ExperimentConfig& cfg);

// Radii from the config, else the per-slope defaults.
absl::StatusOr<Mechanism> ResolveMechanism(const ExperimentConfig& cfg,
                                           std::vector<Eigen::VectorXd> slopes);

// f + a . x + b, keeping the polynomial form and shifting the bounds by a.
absl::StatusOr<ObjectiveSpec> PerturbAffine(const ObjectiveSpec& spec,
                                            const Eigen::VectorXd& a, double b);

absl::StatusOr<AgentProblem> ReplaceAgent(const AgentProblem& problem,
                                          int agent, ObjectiveSpec spec);

struct SweepRow {
  int sample = 0;
  std::vector<Eigen::VectorXd> slopes;
  double eps = 0.0;
  double ub = 0.0;
  double ub_sign_corrected = 0.0;
  std::map<Algorithm, double> error;
  std::map<Algorithm, double> necessary;
  std::map<Algorithm, std::vector<Eigen::VectorXd>> terminal;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by eps ascending, then sample
  std::vector<Eigen::VectorXd> reference;
  std::vector<std::string> violations;
};

inline constexpr double kNecessaryConditionTolerance = 1e-6;

absl::StatusOr<SweepResult> RunSweep(const ExperimentConfig& cfg);
std::string SweepCsv(const SweepResult& result, const ExperimentConfig& cfg);

absl::StatusOr<CommandOutcome> CmdDesign(const ExperimentConfig& cfg);
absl::StatusOr<CommandOutcome> CmdPrivacy(const ExperimentConfig& cfg);
absl::StatusOr<CommandOutcome> CmdSweep(const ExperimentConfig& cfg);
absl::StatusOr<CommandOutcome> CmdVerify(const ExperimentConfig& cfg);
// design, privacy and sweep on one config.
absl::StatusOr<CommandOutcome> CmdReproduceExample(const ExperimentConfig& cfg);

}  // namespace gpriv::harness

#endif  // GPRIV_HARNESS_COMMANDS_H_
