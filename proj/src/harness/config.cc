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

#include "gpriv/harness/config.h"

#include <fstream>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "gpriv/status_macros.h"

namespace gpriv::harness {
namespace {

constexpr std::string_view kBundledPrefix = "bundled:";

absl::Status Usage(std::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("config: ", std::string(what)));
}

template <typename T>
absl::StatusOr<T> Field(const nlohmann::json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    return Usage(absl::StrCat("field '", key, "' has the wrong type"));
  }
}

absl::StatusOr<AgentProblem> LoadProblem(const nlohmann::json& entry,
                                         const std::filesystem::path& base_dir,
                                         std::string* source) {
  if (entry.is_object()) {
    *source = "inline";
    return ProblemFromJson(entry);
  }
  if (!entry.is_string()) return Usage("'problem' must be a path or object");
  const std::string name = entry.get<std::string>();
  *source = name;
  if (name.rfind(kBundledPrefix, 0) == 0) {
    const auto text = BundledFixture(name.substr(kBundledPrefix.size()));
    if (!text) {
      return absl::NotFoundError(absl::StrCat("no bundled fixture '", name, "'"));
    }
    return ProblemFromJson(nlohmann::json::parse(*text));
  }
  std::filesystem::path path(name);
  if (path.is_relative()) path = base_dir / path;
  GPRIV_ASSIGN_OR_RETURN(const nlohmann::json j, ReadJsonFile(path));
  return ProblemFromJson(j);
}

absl::StatusOr<std::vector<Eigen::VectorXd>> ParseSlopes(
    const nlohmann::json& j) {
  if (!j.is_array()) return Usage("'slopes' must be an array");
  std::vector<Eigen::VectorXd> out;
  for (const auto& item : j) {
    if (item.is_number()) {
      out.push_back(Eigen::VectorXd::Constant(1, item.get<double>()));
      continue;
    }
    GPRIV_ASSIGN_OR_RETURN(Eigen::VectorXd v, VectorFromJson(item));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

absl::StatusOr<nlohmann::json> ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open '", path.string(), "'"));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", path.string(), "' is not valid JSON: ", e.what()));
  }
}

absl::StatusOr<ExperimentConfig> ParseConfig(
    const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) return Usage("top level must be an object");
  if (!j.contains("problem")) return Usage("missing 'problem'");
  ExperimentConfig cfg;
  GPRIV_ASSIGN_OR_RETURN(cfg.problem,
                         LoadProblem(j.at("problem"), base_dir,
                                     &cfg.problem_source));
  const int agents = cfg.problem->size();

  if (j.contains("mechanism")) {
    const nlohmann::json& m = j.at("mechanism");
    if (m.contains("slopes") && !m.at("slopes").is_null()) {
      GPRIV_ASSIGN_OR_RETURN(cfg.slopes, ParseSlopes(m.at("slopes")));
      if (static_cast<int>(cfg.slopes->size()) != agents) {
        return Usage(absl::StrCat("expected ", agents, " slopes"));
      }
    }
    if (m.contains("delta") && !m.at("delta").is_null()) {
      GPRIV_ASSIGN_OR_RETURN(std::vector<double> d,
                             Field<std::vector<double>>(m, "delta", {}));
      if (static_cast<int>(d.size()) != agents) {
        return Usage(absl::StrCat("expected ", agents, " delta values"));
      }
      cfg.deltas = std::move(d);
    }
    if (m.contains("slope_floor") && !m.at("slope_floor").is_null()) {
      GPRIV_ASSIGN_OR_RETURN(const double f,
                             Field<double>(m, "slope_floor", 0.0));
      if (!(f >= 0.0)) return Usage("slope_floor must be nonnegative");
      cfg.slope_floor = f;
    }
  }
  if (j.contains("reference")) {
    const nlohmann::json& r = j.at("reference");
    GPRIV_ASSIGN_OR_RETURN(cfg.reference.slopes,
                           Field<std::vector<double>>(r, "slopes", {}));
    GPRIV_ASSIGN_OR_RETURN(cfg.reference.eps,
                           Field<std::vector<double>>(r, "eps", {}));
  }
  if (j.contains("sampling")) {
    const nlohmann::json& s = j.at("sampling");
    GPRIV_ASSIGN_OR_RETURN(cfg.sampling.sample_count,
                           Field<int>(s, "sample_count", 50));
    GPRIV_ASSIGN_OR_RETURN(cfg.sampling.sigma, Field<double>(s, "sigma", 1.0));
    GPRIV_ASSIGN_OR_RETURN(cfg.sampling.seed, Field<uint64_t>(s, "seed", 0));
  }
  if (cfg.sampling.sample_count < 1) return Usage("sample_count must be >= 1");
  if (!(cfg.sampling.sigma > 0.0)) return Usage("sigma must be positive");

  if (j.contains("algorithms")) {
    const nlohmann::json& a = j.at("algorithms");
    if (a.contains("list")) {
      GPRIV_ASSIGN_OR_RETURN(const std::vector<std::string> names,
                             Field<std::vector<std::string>>(a, "list", {}));
      cfg.solvers.algorithms.clear();
      for (const std::string& name : names) {
        GPRIV_ASSIGN_OR_RETURN(const Algorithm alg, ParseAlgorithm(name));
        cfg.solvers.algorithms.push_back(alg);
      }
    }
    AlgorithmConfig& b = cfg.solvers.base;
    GPRIV_ASSIGN_OR_RETURN(b.max_rounds, Field<int>(a, "max_rounds", 20000));
    if (a.contains("step_a") && !a.at("step_a").is_null()) {
      GPRIV_ASSIGN_OR_RETURN(b.step_a, Field<double>(a, "step_a", 0.0));
    }
    GPRIV_ASSIGN_OR_RETURN(b.step_b, Field<double>(a, "step_b", 10.0));
    GPRIV_ASSIGN_OR_RETURN(b.consensus_tolerance,
                           Field<double>(a, "consensus_tolerance", 1e-4));
    GPRIV_ASSIGN_OR_RETURN(b.stationarity_tolerance,
                           Field<double>(a, "stationarity_tolerance", 1e-3));
    GPRIV_ASSIGN_OR_RETURN(cfg.solvers.starts, Field<int>(a, "starts", 5));
    GPRIV_ASSIGN_OR_RETURN(cfg.solvers.graph,
                           Field<std::string>(a, "graph", "complete"));
  }
  if (cfg.solvers.starts < 1) return Usage("starts must be >= 1");
  if (cfg.solvers.graph != "complete" && cfg.solvers.graph != "path") {
    return Usage("graph must be 'complete' or 'path'");
  }
  if (j.contains("certification")) {
    GPRIV_ASSIGN_OR_RETURN(cfg.grid_points,
                           Field<int>(j.at("certification"), "grid_points", 0));
  }
  if (j.contains("verify")) {
    const nlohmann::json& v = j.at("verify");
    VerifyConfig& vc = cfg.verify;
    GPRIV_ASSIGN_OR_RETURN(vc.pairs, Field<int>(v, "pairs", 100));
    GPRIV_ASSIGN_OR_RETURN(vc.properties,
                           Field<std::vector<std::string>>(v, "properties",
                                                           vc.properties));
    GPRIV_ASSIGN_OR_RETURN(vc.soundness_boxes,
                           Field<int>(v, "soundness_boxes", 20));
    GPRIV_ASSIGN_OR_RETURN(vc.soundness_points,
                           Field<int>(v, "soundness_points", 10000));
    GPRIV_ASSIGN_OR_RETURN(vc.tightness_grid,
                           Field<int>(v, "tightness_grid", 100000));
    for (const std::string& p : vc.properties) {
      if (p != "privacy" && p != "soundness" && p != "tightness") {
        return Usage(absl::StrCat("unknown property '", p, "'"));
      }
    }
  }
  GPRIV_ASSIGN_OR_RETURN(const std::string out,
                         Field<std::string>(j, "output_dir", "gpriv_out"));
  cfg.output_dir = out;
  return cfg;
}

absl::StatusOr<ExperimentConfig> LoadConfigFile(
    const std::filesystem::path& path) {
  GPRIV_ASSIGN_OR_RETURN(const nlohmann::json j, ReadJsonFile(path));
  return ParseConfig(j, path.parent_path());
}

absl::StatusOr<ExperimentConfig> BundledExampleConfig() {
  const auto text = BundledFixture("reproduce_example");
  if (!text) return absl::NotFoundError("bundled example config missing");
  return ParseConfig(nlohmann::json::parse(*text), ".");
}

}  // namespace gpriv::harness
