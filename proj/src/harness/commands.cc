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

#include "gpriv/harness/commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "fmt/format.h"
#include "gpriv/accuracy.h"
#include "gpriv/kernels/kernels.h"
#include "gpriv/mixed_monotone.h"
#include "gpriv/random.h"
#include "gpriv/simplex.h"
#include "gpriv/slope_design.h"
#include "gpriv/status_macros.h"

namespace gpriv::harness {
namespace {

constexpr double kMatchTolerance = 0.05;
constexpr double kRoundingTolerance = 1e-12;

absl::Status WriteFile(const std::filesystem::path& path,
                       const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write '", path.string(), "'"));
  }
  out << content;
  return out ? absl::OkStatus()
             : absl::DataLossError(absl::StrCat("short write to '",
                                                path.string(), "'"));
}

absl::Status WriteJson(const std::filesystem::path& path,
                       const nlohmann::json& j) {
  return WriteFile(path, j.dump(2) + "\n");
}

std::string Num(double v) { return fmt::format("{:.10g}", v); }

std::string SlopeText(const Eigen::VectorXd& m) {
  std::vector<std::string> parts;
  for (Eigen::Index j = 0; j < m.size(); ++j) parts.push_back(Num(m[j]));
  return absl::StrJoin(parts, " ");
}

const AgentProblem& Problem(const ExperimentConfig& cfg) {
  return *cfg.problem;
}

absl::StatusOr<std::vector<AgentSlopeDesign>> Design(
    const ExperimentConfig& cfg) {
  SlopeDesignOptions options;
  options.seed = cfg.sampling.seed;
  if (cfg.slope_floor) {
    options.floor_override =
        Eigen::VectorXd::Constant(Problem(cfg).dim(), *cfg.slope_floor);
  }
  return DesignSlopes(Problem(cfg), options);
}

absl::StatusOr<NetworkGraph> BuildGraph(const ExperimentConfig& cfg) {
  const int n = Problem(cfg).size();
  const std::vector<Edge> edges = cfg.solvers.graph == "path"
                                      ? PathGraphEdges(n)
                                      : CompleteGraphEdges(n);
  return MetropolisWeights(edges, n);
}

uint64_t RunSeed(uint64_t seed, int sample, int start, Algorithm alg) {
  uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
  for (uint64_t v : {static_cast<uint64_t>(sample), static_cast<uint64_t>(start),
                     static_cast<uint64_t>(alg)}) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

struct SweepContext {
  const ExperimentConfig* cfg;
  const NetworkGraph* graph;
  const std::vector<Eigen::VectorXd>* reference;
  const std::vector<std::vector<Eigen::VectorXd>>* starts;
};

absl::StatusOr<SweepRow> RunSample(const SweepContext& ctx, int sample,
                                   std::vector<Eigen::VectorXd> slopes) {
  const ExperimentConfig& cfg = *ctx.cfg;
  const AgentProblem& problem = Problem(cfg);
  SweepRow row;
  row.sample = sample;
  GPRIV_ASSIGN_OR_RETURN(const Mechanism mech, ResolveMechanism(cfg, slopes));
  GPRIV_ASSIGN_OR_RETURN(const PrivacyReport privacy,
                         ComputePrivacyReport(problem, mech));
  row.eps = privacy.overall_eps;
  GPRIV_ASSIGN_OR_RETURN(row.ub, UpperBound(slopes, problem.domain()));
  GPRIV_ASSIGN_OR_RETURN(row.ub_sign_corrected,
                         SignCorrectedUpperBound(slopes, problem.domain()));
  for (Algorithm alg : cfg.solvers.algorithms) {
    std::vector<Eigen::VectorXd> terminal;
    for (size_t s = 0; s < ctx.starts->size(); ++s) {
      AlgorithmConfig run = cfg.solvers.base;
      run.kind = alg;
      run.seed = RunSeed(cfg.sampling.seed, sample, static_cast<int>(s), alg);
      run.record_iterates = cfg.trace;
      GPRIV_ASSIGN_OR_RETURN(
          const Trace trace,
          RunDistributed(problem, slopes, *ctx.graph, run, (*ctx.starts)[s]));
      if (cfg.trace) {
        std::ostringstream csv;
        WriteTraceCsv(trace, csv);
        GPRIV_RETURN_IF_ERROR(WriteFile(
            cfg.output_dir / "traces" /
                fmt::format("sample{}_{}_start{}.csv", sample,
                            AlgorithmName(alg), s + 1),
            csv.str()));
      }
      terminal.push_back(trace.consensus);
    }
    GPRIV_ASSIGN_OR_RETURN(row.error[alg],
                           EmpiricalError(*ctx.reference, terminal));
    GPRIV_ASSIGN_OR_RETURN(
        row.necessary[alg],
        NecessaryConditionValue(slopes, *ctx.reference, terminal));
    row.terminal[alg] = std::move(terminal);
  }
  row.slopes = std::move(slopes);
  return row;
}

nlohmann::json PointsJson(const std::vector<Eigen::VectorXd>& xs) {
  nlohmann::json a = nlohmann::json::array();
  for (const Eigen::VectorXd& x : xs) a.push_back(VectorToJson(x));
  return a;
}

// --- verify helpers -------------------------------------------------------

struct PropertyResult {
  std::string name;
  bool pass = true;
  nlohmann::json detail;
};

absl::StatusOr<PropertyResult> CheckPrivacyPairs(const ExperimentConfig& cfg,
                                                 const Mechanism& mech) {
  const AgentProblem& f = Problem(cfg);
  const Box& x0 = f.domain();
  PropertyResult result{"privacy", true, {}};
  GPRIV_ASSIGN_OR_RETURN(const IntervalVector m, ApplyMechanism(f, mech, x0));
  Rng rng(cfg.sampling.seed ^ 0x51ed270b27f7a3c5ull);
  nlohmann::json failures = nlohmann::json::array();
  double worst_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < cfg.verify.pairs; ++t) {
    const int i0 = static_cast<int>(rng.NextU64() % f.size());
    const double delta = mech.radii()[i0];
    Eigen::VectorXd a = Eigen::VectorXd::Zero(f.dim());
    double b = 0.0;
    if (t % 10 == 9) {
      b = (t / 10) % 2 == 0 ? delta : -delta;
    } else {
      // a . x + b with sum_j |a_j| max(|lo_j|, |hi_j|) + |b| = r <= delta.
      const double r = delta * rng.Uniform01();
      const double share = rng.Uniform01();
      const Eigen::VectorXd reach = x0.lo().cwiseAbs().cwiseMax(x0.hi().cwiseAbs());
      Eigen::VectorXd w(f.dim());
      for (int j = 0; j < f.dim(); ++j) w[j] = rng.Uniform01() + 1e-3;
      const double budget = r * share;
      const double denom = w.dot(reach);
      for (int j = 0; j < f.dim(); ++j) {
        const double sign = rng.Uniform01() < 0.5 ? -1.0 : 1.0;
        a[j] = denom > 0.0 ? sign * budget * w[j] / denom : 0.0;
      }
      b = (rng.Uniform01() < 0.5 ? -1.0 : 1.0) * (r - budget);
    }
    GPRIV_ASSIGN_OR_RETURN(ObjectiveSpec changed,
                           PerturbAffine(f.objective(i0), a, b));
    GPRIV_ASSIGN_OR_RETURN(const AgentProblem fp,
                           ReplaceAgent(f, i0, std::move(changed)));
    std::vector<Interval> inflated;
    for (int i = 0; i < m.size(); ++i) {
      const double w = std::max(m[i].Width(), 1.0);
      inflated.push_back({m[i].lo - w * rng.Uniform01(),
                          m[i].hi + w * rng.Uniform01()});
    }
    GPRIV_ASSIGN_OR_RETURN(const IntervalVector witness,
                           IntervalVector::Create(std::move(inflated)));
    GPRIV_ASSIGN_OR_RETURN(const PrivacyCheck check,
                           VerifyPrivacyInequality(f, fp, mech, witness));
    worst_slack = std::min(worst_slack, check.slack);
    if (!check.holds) {
      result.pass = false;
      nlohmann::json dump = PrivacyCheckToJson(check);
      dump["trial"] = t;
      dump["perturbation_slope"] = VectorToJson(a);
      dump["perturbation_offset"] = b;
      dump["witness"] = IntervalVectorToJson(witness);
      failures.push_back(std::move(dump));
    }
  }
  result.detail = {{"pairs", cfg.verify.pairs},
                   {"worst_slack", cfg.verify.pairs > 0 ? worst_slack : 0.0},
                   {"failures", failures}};
  return result;
}

absl::StatusOr<PropertyResult> CheckSoundness(const ExperimentConfig& cfg,
                                              const Mechanism& mech) {
  const AgentProblem& problem = Problem(cfg);
  const Box& x0 = problem.domain();
  const int n = problem.dim();
  PropertyResult result{"soundness", true, {}};
  const std::vector<Box> boxes =
      SampleSubintervals(x0, cfg.verify.soundness_boxes, cfg.sampling.seed);
  Rng rng(cfg.sampling.seed ^ 0x2545f4914f6cdd1dull);
  int64_t checked = 0;
  nlohmann::json witness;
  for (size_t b = 0; b < boxes.size() && result.pass; ++b) {
    GPRIV_ASSIGN_OR_RETURN(const IntervalVector inc,
                           ApplyMechanism(problem, mech, boxes[b]));
    for (int i = 0; i < problem.size() && result.pass; ++i) {
      const ObjectiveSpec& spec = problem.objective(i);
      const Eigen::VectorXd& m = mech.slopes()[i];
      std::vector<Eigen::VectorXd> pts;
      for (uint64_t mask = 0; mask < (uint64_t{1} << std::min(n, 10)); ++mask) {
        pts.push_back(boxes[b].Vertex(mask));
      }
      for (int k = 0; k < cfg.verify.soundness_points; ++k) {
        Eigen::VectorXd x(n);
        for (int j = 0; j < n; ++j) {
          x[j] = rng.Uniform(boxes[b].lo()[j], boxes[b].hi()[j]);
        }
        pts.push_back(std::move(x));
      }
      std::vector<double> values(pts.size());
      if (n == 1) {
        std::vector<double> xs(pts.size());
        for (size_t k = 0; k < pts.size(); ++k) xs[k] = pts[k][0];
        EvaluateBatch(spec, xs, values);
        for (size_t k = 0; k < pts.size(); ++k) values[k] += m[0] * xs[k];
      } else {
        for (size_t k = 0; k < pts.size(); ++k) {
          values[k] = spec.Evaluate(pts[k]) + m.dot(pts[k]);
        }
      }
      // Allow for rounding between the inclusion formula and direct
      // evaluation, which disagree by a few ulps on degenerate boxes.
      const double slack =
          kRoundingTolerance *
          std::max({1.0, std::abs(inc[i].lo), std::abs(inc[i].hi)});
      const kernels::OutsideCount out = kernels::CountOutside(
          values, inc[i].lo - slack, inc[i].hi + slack);
      checked += static_cast<int64_t>(values.size());
      if (out.count > 0) {
        result.pass = false;
        const size_t k = *out.first;
        witness = {{"agent", i + 1},
                   {"box", BoxToJson(boxes[b])},
                   {"x", VectorToJson(pts[k])},
                   {"value", values[k]},
                   {"interval", {inc[i].lo, inc[i].hi}},
                   {"violations_in_box", out.count}};
      }
    }
  }
  result.detail = {{"boxes", boxes.size()}, {"points_checked", checked}};
  if (!result.pass) result.detail["witness"] = witness;
  return result;
}

absl::StatusOr<PropertyResult> CheckTightness(const ExperimentConfig& cfg) {
  const AgentProblem& problem = Problem(cfg);
  const Box& x0 = problem.domain();
  const int n = problem.dim();
  PropertyResult result{"tightness", true, {}};
  if (n > 2) {
    result.detail = {{"skipped", "grid oracle limited to dimension <= 2"}};
    return result;
  }
  const int per_axis = n == 1 ? cfg.verify.tightness_grid
                              : static_cast<int>(std::sqrt(
                                    static_cast<double>(cfg.verify.tightness_grid)));
  if (per_axis < 2) return absl::InvalidArgumentError("tightness grid too small");
  std::vector<Eigen::VectorXd> grid;
  {
    const Eigen::VectorXd h = x0.Widths() / (per_axis - 1);
    const int total = n == 1 ? per_axis : per_axis * per_axis;
    for (int k = 0; k < total; ++k) {
      Eigen::VectorXd x(n);
      int rest = k;
      for (int j = 0; j < n; ++j) {
        const int idx = rest % per_axis;
        rest /= per_axis;
        x[j] = idx + 1 == per_axis ? x0.hi()[j] : x0.lo()[j] + idx * h[j];
      }
      grid.push_back(std::move(x));
    }
  }
  double worst = 0.0;
  nlohmann::json witness;
  for (int i = 0; i < problem.size(); ++i) {
    GPRIV_ASSIGN_OR_RETURN(const std::vector<SlopeVertex> vertices,
                           EnumerateVertices(problem.objective(i)));
    for (size_t v = 0; v < vertices.size(); ++v) {
      GPRIV_ASSIGN_OR_RETURN(
          const JssDecomposition dec,
          JssDecomposition::Create(problem.objective(i), vertices[v]));
      GPRIV_ASSIGN_OR_RETURN(const RemainderExtrema ext, dec.Extrema(x0));
      std::vector<double> values(grid.size());
      for (size_t k = 0; k < grid.size(); ++k) values[k] = dec.Remainder(grid[k]);
      const kernels::MinMax mm = kernels::MinMaxReduce(values);
      const double dmin =
          std::abs(ext.min - mm.min) / (1.0 + std::abs(mm.min));
      const double dmax =
          std::abs(ext.max - mm.max) / (1.0 + std::abs(mm.max));
      const double d = std::max(dmin, dmax);
      if (d > worst) worst = d;
      if (d > 1e-6 && result.pass) {
        result.pass = false;
        witness = {{"agent", i + 1},
                   {"vertex_slope", VectorToJson(vertices[v].slope)},
                   {"h_min", ext.min},
                   {"grid_min", mm.min},
                   {"h_max", ext.max},
                   {"grid_max", mm.max}};
      }
    }
  }
  result.detail = {{"grid_points", grid.size()}, {"worst_relative_gap", worst}};
  if (!result.pass) result.detail["witness"] = witness;
  return result;
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInternal:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kUnknown:
      return kExitNumerical;
    default:
      return kExitUsage;
  }
}

absl::StatusOr<std::vector<Eigen::VectorXd>> ResolveSlopes(
    const ExperimentConfig& cfg) {
  if (cfg.slopes) return *cfg.slopes;
  GPRIV_ASSIGN_OR_RETURN(const std::vector<AgentSlopeDesign> designs,
                         Design(cfg));
  std::vector<Eigen::VectorXd> out;
  for (const AgentSlopeDesign& d : designs) {
    if (d.floored.status != LpStatus::kOptimal) {
      return absl::InternalError(absl::StrCat(
          "agent ", d.agent + 1, ": slope design ",
          std::string(LpStatusName(d.floored.status))));
    }
    out.push_back(d.floored.m_tilde_star);
  }
  return out;
}

absl::StatusOr<Mechanism> ResolveMechanism(const ExperimentConfig& cfg,
                                           std::vector<Eigen::VectorXd> slopes) {
  if (cfg.deltas) {
    return Mechanism::Create(Problem(cfg), std::move(slopes), *cfg.deltas);
  }
  return Mechanism::WithDefaultRadii(Problem(cfg), std::move(slopes));
}

absl::StatusOr<ObjectiveSpec> PerturbAffine(const ObjectiveSpec& spec,
                                            const Eigen::VectorXd& a,
                                            double b) {
  if (a.size() != spec.dim()) {
    return absl::InvalidArgumentError("perturbation dimension mismatch");
  }
  std::optional<Polynomial> poly;
  if (spec.polynomial()) poly = *spec.polynomial() + Polynomial::Affine(a, b);
  ScalarField value = [f = spec.evaluator(), a, b](const Eigen::VectorXd& x) {
    return f(x) + a.dot(x) + b;
  };
  VectorField grad = [g = spec.gradient_field(), a](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(g(x) + a);
  };
  JacobianBounds bounds{spec.jac_lo() + a, spec.jac_hi() + a};
  return ObjectiveSpec::Create(spec.domain(), std::move(value), std::move(grad),
                               std::move(bounds), std::move(poly));
}

absl::StatusOr<AgentProblem> ReplaceAgent(const AgentProblem& problem,
                                          int agent, ObjectiveSpec spec) {
  if (agent < 0 || agent >= problem.size()) {
    return absl::InvalidArgumentError("agent index out of range");
  }
  std::vector<ObjectiveSpec> specs = problem.objectives();
  specs[agent] = std::move(spec);
  return AgentProblem::Create(std::move(specs));
}

absl::StatusOr<SweepResult> RunSweep(const ExperimentConfig& cfg) {
  const AgentProblem& problem = Problem(cfg);
  GPRIV_ASSIGN_OR_RETURN(const std::vector<Eigen::VectorXd> center,
                         ResolveSlopes(cfg));
  SweepResult result;
  GPRIV_ASSIGN_OR_RETURN(result.reference,
                         CertifyReferenceOptimizers(problem, cfg.grid_points));
  GPRIV_ASSIGN_OR_RETURN(const NetworkGraph graph, BuildGraph(cfg));
  const auto starts = MultiStartPoints(problem.domain(), problem.size(),
                                       cfg.solvers.starts);

  Rng rng(cfg.sampling.seed);
  std::vector<std::vector<Eigen::VectorXd>> samples;
  for (int k = 0; k < cfg.sampling.sample_count; ++k) {
    std::vector<Eigen::VectorXd> slopes;
    for (const Eigen::VectorXd& c : center) {
      Eigen::VectorXd m(c.size());
      for (Eigen::Index j = 0; j < c.size(); ++j) {
        m[j] = rng.Normal(c[j], cfg.sampling.sigma);
      }
      slopes.push_back(std::move(m));
    }
    samples.push_back(std::move(slopes));
  }

  const SweepContext ctx{&cfg, &graph, &result.reference, &starts};
  const int workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::optional<absl::StatusOr<SweepRow>>> rows(samples.size());
  for (size_t begin = 0; begin < samples.size(); begin += workers) {
    const size_t end = std::min(samples.size(), begin + workers);
    std::vector<std::future<absl::StatusOr<SweepRow>>> jobs;
    for (size_t k = begin; k < end; ++k) {
      jobs.push_back(std::async(std::launch::async, RunSample, std::cref(ctx),
                                static_cast<int>(k + 1), samples[k]));
    }
    for (size_t k = begin; k < end; ++k) rows[k] = jobs[k - begin].get();
  }
  for (auto& r : rows) {
    if (!r->ok()) return r->status();
    result.rows.push_back(*std::move(*r));
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     return a.eps < b.eps;
                   });
  for (const SweepRow& row : result.rows) {
    for (const auto& [alg, e] : row.error) {
      if (!(e <= row.ub)) {
        result.violations.push_back(fmt::format(
            "sample {}: err_{} = {:.10g} exceeds ub = {:.10g}", row.sample,
            AlgorithmName(alg), e, row.ub));
      }
      const double nc = row.necessary.at(alg);
      if (!(nc <= kNecessaryConditionTolerance)) {
        result.violations.push_back(fmt::format(
            "sample {}: {} necessary condition m(x* - xt*) = {:.10g} > {:g}",
            row.sample, AlgorithmName(alg), nc, kNecessaryConditionTolerance));
      }
    }
  }
  return result;
}

std::string SweepCsv(const SweepResult& result, const ExperimentConfig& cfg) {
  const int agents = Problem(cfg).size();
  std::string out = "sample,eps,ub,err_dgd,err_tracking,err_zo";
  for (int i = 1; i <= agents; ++i) out += fmt::format(",mtilde_{}", i);
  out += '\n';
  for (const SweepRow& row : result.rows) {
    out += fmt::format("{},{},{}", row.sample, Num(row.eps), Num(row.ub));
    for (Algorithm alg : {Algorithm::kDgd, Algorithm::kGradientTracking,
                          Algorithm::kZerothOrder}) {
      const auto it = row.error.find(alg);
      out += ',';
      if (it != row.error.end()) out += Num(it->second);
    }
    for (const Eigen::VectorXd& m : row.slopes) out += "," + SlopeText(m);
    out += '\n';
  }
  return out;
}

absl::StatusOr<CommandOutcome> CmdDesign(const ExperimentConfig& cfg) {
  GPRIV_ASSIGN_OR_RETURN(const std::vector<AgentSlopeDesign> designs,
                         Design(cfg));
  CommandOutcome outcome;
  nlohmann::json agents = nlohmann::json::array();
  std::string text = fmt::format("{:>5} {:>12} {:>12} {:>12} {:>12}\n", "agent",
                                 "vertex", "lp_mtilde", "floor_mtilde",
                                 "floor_theta");
  for (const AgentSlopeDesign& d : designs) {
    nlohmann::json entry = AgentSlopeDesignToJson(d);
    GPRIV_ASSIGN_OR_RETURN(const LpStandardForm lp,
                           BuildLp(d.vertex, Problem(cfg).domain()));
    const std::string dump_name = fmt::format("lp_agent{}.txt", d.agent + 1);
    GPRIV_RETURN_IF_ERROR(WriteFile(cfg.output_dir / dump_name,
                                    CanonicalText(lp.ToLinearProgram())));
    entry["lp_dump"] = dump_name;
    const bool scalar = Problem(cfg).dim() == 1;
    if (scalar && d.agent < static_cast<int>(cfg.reference.slopes.size())) {
      const double ref = cfg.reference.slopes[d.agent];
      nlohmann::json cmp = {{"reference", ref}};
      if (d.verbatim.status == LpStatus::kOptimal) {
        cmp["verbatim_matches"] =
            std::abs(d.verbatim.m_tilde_star[0] - ref) <= kMatchTolerance;
      }
      if (d.floored.status == LpStatus::kOptimal) {
        cmp["floored_matches"] =
            std::abs(d.floored.m_tilde_star[0] - ref) <= kMatchTolerance;
      }
      entry["reference_comparison"] = cmp;
    }
    agents.push_back(std::move(entry));
    auto show = [](const SlopeDesignResult& r) {
      return r.status == LpStatus::kOptimal ? SlopeText(r.m_tilde_star)
                                            : std::string(LpStatusName(r.status));
    };
    text += fmt::format("{:>5} {:>12} {:>12} {:>12} {:>12}\n", d.agent + 1,
                        SlopeText(d.vertex.slope), show(d.verbatim),
                        show(d.floored),
                        d.floored.status == LpStatus::kOptimal
                            ? Num(d.floored.objective_value)
                            : "-");
  }
  outcome.report = {{"command", "design"}, {"agents", agents}};
  outcome.text = text;
  GPRIV_RETURN_IF_ERROR(WriteJson(cfg.output_dir / "design.json", outcome.report));
  return outcome;
}

absl::StatusOr<CommandOutcome> CmdPrivacy(const ExperimentConfig& cfg) {
  const AgentProblem& problem = Problem(cfg);
  GPRIV_ASSIGN_OR_RETURN(std::vector<Eigen::VectorXd> slopes,
                         ResolveSlopes(cfg));
  GPRIV_ASSIGN_OR_RETURN(const Mechanism mech, ResolveMechanism(cfg, slopes));
  GPRIV_ASSIGN_OR_RETURN(const PrivacyReport report,
                         ComputePrivacyReport(problem, mech));
  CommandOutcome outcome;
  outcome.report = PrivacyReportToJson(report);
  outcome.report["command"] = "privacy";
  std::string text = fmt::format("{:>5} {:>10} {:>10} {:>10} {:>10} {:>12} {:>10}\n",
                                 "agent", "slope", "delta", "eps", "delta*",
                                 "eps(delta*)", "reference");
  for (int i = 0; i < problem.size(); ++i) {
    nlohmann::json& entry = outcome.report["agents"][i];
    entry["slope"] = VectorToJson(slopes[i]);
    const double ds = DeltaStar(slopes[i], problem.domain());
    entry["delta_star"] = ds;
    std::string eps_ds = "-";
    if (ds > 0.0) {
      GPRIV_ASSIGN_OR_RETURN(const EpsilonGap g,
                             ComputeEpsilonGap(problem.objective(i), slopes[i], ds));
      entry["eps_at_delta_star"] = g.epsilon;
      eps_ds = Num(g.epsilon);
    }
    std::string ref = "-";
    if (i < static_cast<int>(cfg.reference.eps.size())) {
      entry["reference_eps"] = cfg.reference.eps[i];
      ref = Num(cfg.reference.eps[i]);
    }
    text += fmt::format("{:>5} {:>10} {:>10} {:>10} {:>10} {:>12} {:>10}\n",
                        i + 1, SlopeText(slopes[i]), Num(report.radii[i]),
                        Num(report.per_agent_eps[i]), Num(ds), eps_ds, ref);
  }
  text += fmt::format("overall eps = {}\n", Num(report.overall_eps));
  outcome.text = text;
  GPRIV_RETURN_IF_ERROR(
      WriteJson(cfg.output_dir / "privacy.json", outcome.report));
  return outcome;
}

absl::StatusOr<CommandOutcome> CmdSweep(const ExperimentConfig& cfg) {
  GPRIV_ASSIGN_OR_RETURN(const SweepResult result, RunSweep(cfg));
  GPRIV_RETURN_IF_ERROR(
      WriteFile(cfg.output_dir / "sweep.csv", SweepCsv(result, cfg)));
  CommandOutcome outcome;
  nlohmann::json rows = nlohmann::json::array();
  int corrected_violations = 0;
  for (const SweepRow& row : result.rows) {
    nlohmann::json r = {{"sample", row.sample},
                        {"eps", row.eps},
                        {"ub", row.ub},
                        {"ub_sign_corrected", row.ub_sign_corrected}};
    for (const auto& [alg, e] : row.error) {
      const std::string name(AlgorithmName(alg));
      r["err_" + name] = e;
      r["necessary_" + name] = row.necessary.at(alg);
      r["terminal_" + name] = PointsJson(row.terminal.at(alg));
      if (!(e <= row.ub_sign_corrected)) ++corrected_violations;
    }
    rows.push_back(std::move(r));
  }
  outcome.report = {{"command", "sweep"},
                    {"samples", result.rows.size()},
                    {"reference_optimizers", PointsJson(result.reference)},
                    {"dominance_holds", result.violations.empty()},
                    {"violations", result.violations},
                    {"sign_corrected_violations", corrected_violations},
                    {"rows", rows}};
  GPRIV_RETURN_IF_ERROR(
      WriteJson(cfg.output_dir / "sweep_summary.json", outcome.report));
  outcome.text = fmt::format("{} rows written to {}\n", result.rows.size(),
                             (cfg.output_dir / "sweep.csv").string());
  if (!result.violations.empty()) {
    outcome.exit_code = kExitViolation;
    outcome.text += fmt::format("{} dominance violations:\n", result.violations.size());
    for (const std::string& v : result.violations) outcome.text += "  " + v + "\n";
  }
  return outcome;
}

absl::StatusOr<CommandOutcome> CmdVerify(const ExperimentConfig& cfg) {
  CommandOutcome outcome;
  nlohmann::json props = nlohmann::json::array();
  std::optional<Mechanism> mech;
  const auto& wanted = cfg.verify.properties;
  auto wants = [&](const char* name) {
    return std::find(wanted.begin(), wanted.end(), name) != wanted.end();
  };
  if (wants("privacy") || wants("soundness")) {
    GPRIV_ASSIGN_OR_RETURN(std::vector<Eigen::VectorXd> slopes,
                           ResolveSlopes(cfg));
    GPRIV_ASSIGN_OR_RETURN(mech, ResolveMechanism(cfg, std::move(slopes)));
  }
  std::vector<PropertyResult> results;
  for (const std::string& name : wanted) {
    absl::StatusOr<PropertyResult> r =
        name == "privacy"     ? CheckPrivacyPairs(cfg, *mech)
        : name == "soundness" ? CheckSoundness(cfg, *mech)
                              : CheckTightness(cfg);
    if (!r.ok()) return r.status();
    results.push_back(*std::move(r));
  }
  for (const PropertyResult& r : results) {
    props.push_back({{"property", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    outcome.text += fmt::format("{:<10} {}\n", r.name, r.pass ? "PASS" : "FAIL");
    if (!r.pass) outcome.exit_code = kExitViolation;
  }
  outcome.report = {{"command", "verify"},
                    {"pass", outcome.exit_code == kExitOk},
                    {"properties", props}};
  GPRIV_RETURN_IF_ERROR(WriteJson(cfg.output_dir / "verify.json", outcome.report));
  return outcome;
}

absl::StatusOr<CommandOutcome> CmdReproduceExample(const ExperimentConfig& cfg) {
  CommandOutcome outcome;
  GPRIV_ASSIGN_OR_RETURN(const CommandOutcome design, CmdDesign(cfg));
  GPRIV_ASSIGN_OR_RETURN(const CommandOutcome privacy, CmdPrivacy(cfg));

  GPRIV_ASSIGN_OR_RETURN(const std::vector<Eigen::VectorXd> slopes,
                         ResolveSlopes(cfg));
  GPRIV_ASSIGN_OR_RETURN(
      AccuracyReport accuracy,
      ComputeAccuracyReport(slopes, Problem(cfg).domain()));
  GPRIV_ASSIGN_OR_RETURN(
      accuracy.reference_optimizers,
      CertifyReferenceOptimizers(Problem(cfg), cfg.grid_points));
  GPRIV_RETURN_IF_ERROR(WriteJson(cfg.output_dir / "accuracy.json",
                                  AccuracyReportToJson(accuracy)));

  GPRIV_ASSIGN_OR_RETURN(const CommandOutcome sweep, CmdSweep(cfg));
  outcome.exit_code = sweep.exit_code;
  outcome.report = {{"command", "reproduce-example"},
                    {"design", design.report},
                    {"privacy", privacy.report},
                    {"accuracy", AccuracyReportToJson(accuracy)},
                    {"sweep_dominance_holds", sweep.report["dominance_holds"]},
                    {"sweep_violations", sweep.report["violations"].size()}};
  outcome.text = "slope design\n" + design.text + "\nprivacy\n" + privacy.text +
                 "\nsweep\n" + sweep.text;
  return outcome;
}

}  // namespace gpriv::harness
