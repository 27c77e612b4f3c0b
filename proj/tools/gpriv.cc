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

// gpriv: privacy-preserving distributed optimization experiments.
//
//   gpriv design|privacy|sweep|verify --config PATH [--out DIR] [--seed N]
//   gpriv reproduce-example [--out DIR] [--seed N] [--samples N]

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/str_split.h"
#include "gpriv/harness/commands.h"
#include "gpriv/harness/config.h"

namespace {

using gpriv::harness::CommandOutcome;
using gpriv::harness::ExperimentConfig;

struct Flags {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  std::string algorithms;
  std::optional<int> samples;
  bool trace = false;
};

absl::Status ApplyFlags(const Flags& flags, ExperimentConfig& cfg) {
  if (flags.seed) cfg.sampling.seed = *flags.seed;
  if (flags.samples) {
    if (*flags.samples < 1) {
      return absl::InvalidArgumentError("--samples must be >= 1");
    }
    cfg.sampling.sample_count = *flags.samples;
  }
  if (!flags.out.empty()) cfg.output_dir = flags.out;
  if (!flags.algorithms.empty()) {
    cfg.solvers.algorithms.clear();
    for (absl::string_view name :
         absl::StrSplit(flags.algorithms, ',', absl::SkipEmpty())) {
      auto alg = gpriv::ParseAlgorithm(std::string(name));
      if (!alg.ok()) return alg.status();
      cfg.solvers.algorithms.push_back(*alg);
    }
  }
  cfg.trace = flags.trace;
  return absl::OkStatus();
}

int Fail(const absl::Status& status) {
  std::cerr << "gpriv: " << status.message() << "\n";
  return gpriv::harness::ExitCodeFor(status);
}

int Run(const std::string& command, const Flags& flags) {
  absl::StatusOr<ExperimentConfig> cfg =
      command == "reproduce-example" && flags.config.empty()
          ? gpriv::harness::BundledExampleConfig()
          : flags.config.empty()
                ? absl::InvalidArgumentError("--config is required")
                : gpriv::harness::LoadConfigFile(flags.config);
  if (!cfg.ok()) return Fail(cfg.status());
  if (absl::Status s = ApplyFlags(flags, *cfg); !s.ok()) return Fail(s);

  absl::StatusOr<CommandOutcome> outcome =
      command == "design"    ? gpriv::harness::CmdDesign(*cfg)
      : command == "privacy" ? gpriv::harness::CmdPrivacy(*cfg)
      : command == "sweep"   ? gpriv::harness::CmdSweep(*cfg)
      : command == "verify"  ? gpriv::harness::CmdVerify(*cfg)
                             : gpriv::harness::CmdReproduceExample(*cfg);
  if (!outcome.ok()) return Fail(outcome.status());
  std::cout << outcome->text;
  return outcome->exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guaranteed-privacy distributed optimization experiments"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"design", "Design perturbation slopes per agent"},
      {"privacy", "Report per-agent privacy gaps"},
      {"sweep", "Sample slopes, run the solvers and tabulate error vs bound"},
      {"verify", "Run the privacy, soundness and tightness properties"},
      {"reproduce-example", "Run design, privacy and sweep on the bundled example"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "Experiment config (JSON)");
    sub->add_option("--seed", flags.seed, "Override the sampling seed");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--algorithms", flags.algorithms,
                    "Comma list of dgd, tracking, zo");
    sub->add_option("--samples", flags.samples, "Override the sample count");
    sub->add_flag("--trace", flags.trace, "Write per-round iterate CSVs");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gpriv::harness::kExitUsage;
  }
  return Run(app.get_subcommands().front()->get_name(), flags);
}
