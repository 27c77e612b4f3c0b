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

#include "gpriv/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "gpriv/accuracy.h"
#include "gpriv/random.h"
#include "gpriv/status_macros.h"

namespace gpriv {
namespace {

constexpr int kEqualityProbes = 64;
constexpr uint64_t kEqualityProbeSeed = 0x5eed;
constexpr double kRoundingSlack = 1e-12;

bool SameBox(const Box& a, const Box& b) {
  return a.dim() == b.dim() && a.lo() == b.lo() && a.hi() == b.hi();
}

// Vertices of the domain followed by a fixed pseudo-random sample.
std::vector<Eigen::VectorXd> ProbePoints(const Box& box) {
  std::vector<Eigen::VectorXd> pts;
  const int corner_bits = std::min(box.dim(), 10);
  for (uint64_t mask = 0; mask < (uint64_t{1} << corner_bits); ++mask) {
    pts.push_back(box.Vertex(mask));
  }
  Rng rng(kEqualityProbeSeed);
  for (int k = 0; k < kEqualityProbes; ++k) {
    Eigen::VectorXd x(box.dim());
    for (int j = 0; j < box.dim(); ++j) {
      x[j] = rng.Uniform(box.lo()[j], box.hi()[j]);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

bool Differs(const ObjectiveSpec& a, const ObjectiveSpec& b) {
  if (a.polynomial() && b.polynomial()) {
    return !(*a.polynomial() == *b.polynomial());
  }
  if (a.jac_lo() != b.jac_lo() || a.jac_hi() != b.jac_hi()) return true;
  for (const Eigen::VectorXd& x : ProbePoints(a.domain())) {
    if (a.Evaluate(x) != b.Evaluate(x)) return true;
  }
  return false;
}

double AffineSupAbs(const Polynomial& p, const Box& box) {
  const Eigen::VectorXd a = p.LinearPart();
  double hi = p.ConstantTerm(), lo = p.ConstantTerm();
  for (int j = 0; j < box.dim(); ++j) {
    const double u = a[j] * box.lo()[j], v = a[j] * box.hi()[j];
    hi += std::max(u, v);
    lo += std::min(u, v);
  }
  return std::max(std::abs(hi), std::abs(lo));
}

// min over slope vertices of max |.| on the mixed-monotone inclusion.
absl::StatusOr<double> InclusionSupAbs(const ObjectiveSpec& diff) {
  GPRIV_ASSIGN_OR_RETURN(const std::vector<SlopeVertex> vertices,
                         EnumerateVertices(diff));
  double best = std::numeric_limits<double>::infinity();
  for (const SlopeVertex& v : vertices) {
    GPRIV_ASSIGN_OR_RETURN(const JssDecomposition dec,
                           JssDecomposition::Create(diff, v));
    GPRIV_ASSIGN_OR_RETURN(const Interval r,
                           dec.Inclusion(diff.domain(), Eigen::VectorXd()));
    best = std::min(best, std::max(std::abs(r.lo), std::abs(r.hi)));
  }
  return best;
}

absl::StatusOr<double> SupDistance(const ObjectiveSpec& f,
                                   const ObjectiveSpec& fp) {
  const Box& box = f.domain();
  if (f.polynomial() && fp.polynomial()) {
    const Polynomial diff = *fp.polynomial() - *f.polynomial();
    if (diff.IsAffine()) return AffineSupAbs(diff, box);
    GPRIV_ASSIGN_OR_RETURN(const ObjectiveSpec spec, PolyToSpec(diff, box));
    GPRIV_ASSIGN_OR_RETURN(const double bound, InclusionSupAbs(spec));
    const Interval crude = diff.RangeBound(box);
    return std::min(bound, std::max(std::abs(crude.lo), std::abs(crude.hi)));
  }
  ScalarField value = [f, fp](const Eigen::VectorXd& x) {
    return fp.Evaluate(x) - f.Evaluate(x);
  };
  VectorField grad = [f, fp](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(fp.Gradient(x) - f.Gradient(x));
  };
  JacobianBounds bounds{fp.jac_lo() - f.jac_hi(), fp.jac_hi() - f.jac_lo()};
  GPRIV_ASSIGN_OR_RETURN(
      const ObjectiveSpec spec,
      ObjectiveSpec::Create(box, std::move(value), std::move(grad),
                            std::move(bounds)));
  return InclusionSupAbs(spec);
}

absl::Status CheckSized(const AgentProblem& problem, const Mechanism& mech) {
  if (mech.size() != problem.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("mechanism has ", mech.size(), " agents, problem has ",
                     problem.size()));
  }
  if (!SameBox(mech.domain(), problem.domain())) {
    return absl::InvalidArgumentError("mechanism domain differs from problem");
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Mechanism> Mechanism::Create(const AgentProblem& problem,
                                            std::vector<Eigen::VectorXd> slopes,
                                            std::vector<double> radii) {
  if (static_cast<int>(slopes.size()) != problem.size() ||
      static_cast<int>(radii.size()) != problem.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "mechanism needs ", problem.size(), " slopes and radii, got ",
        slopes.size(), " and ", radii.size()));
  }
  for (int i = 0; i < problem.size(); ++i) {
    if (slopes[i].size() != problem.dim() || !slopes[i].allFinite()) {
      return absl::InvalidArgumentError(
          absl::StrCat("slope ", i + 1, " is malformed"));
    }
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) {
      return absl::InvalidArgumentError(absl::StrCat(
          "vicinity radius ", i + 1, " must be positive, got ", radii[i]));
    }
  }
  return Mechanism(std::move(slopes), std::move(radii), problem.domain());
}

absl::StatusOr<Mechanism> Mechanism::WithDefaultRadii(
    const AgentProblem& problem, std::vector<Eigen::VectorXd> slopes) {
  std::vector<double> radii;
  for (const Eigen::VectorXd& m : slopes) {
    if (m.size() != problem.dim()) {
      return absl::InvalidArgumentError("slope dimension mismatch");
    }
    radii.push_back(DefaultRadius(m, problem.domain()));
  }
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "default vicinity radius of agent ", i + 1,
          " is zero; give delta explicitly"));
    }
  }
  return Create(problem, std::move(slopes), std::move(radii));
}

double DefaultRadius(const Eigen::VectorXd& slope, const Box& domain) {
  return std::max(DeltaStar(slope, domain),
                  slope.cwiseAbs().dot(domain.Widths()));
}

absl::StatusOr<JssDecomposition> EpsilonMinimizingDecomposition(
    const ObjectiveSpec& spec, const Eigen::VectorXd& slope) {
  if (slope.size() != spec.dim()) {
    return absl::InvalidArgumentError("slope dimension mismatch");
  }
  GPRIV_ASSIGN_OR_RETURN(const std::vector<SlopeVertex> vertices,
                         EnumerateVertices(spec));
  std::optional<JssDecomposition> best;
  double best_width = -1.0;
  for (const SlopeVertex& v : vertices) {
    GPRIV_ASSIGN_OR_RETURN(JssDecomposition dec,
                           JssDecomposition::Create(spec, v));
    GPRIV_ASSIGN_OR_RETURN(const double c, dec.RangeWidth(spec.domain(), slope));
    if (c > best_width) {
      best_width = c;
      best = std::move(dec);
    }
  }
  return *std::move(best);
}

double EpsilonFromWidth(double range_width, double delta) {
  return std::log1p(2.0 * delta / range_width) / delta;
}

absl::StatusOr<double> EpsilonAtVertex(const ObjectiveSpec& spec,
                                       const SlopeVertex& vertex,
                                       const Eigen::VectorXd& slope,
                                       double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    return absl::InvalidArgumentError("delta must be positive and finite");
  }
  if (spec.domain().IsSingleton()) {
    return absl::FailedPreconditionError("domain is a single point");
  }
  GPRIV_ASSIGN_OR_RETURN(const JssDecomposition dec,
                         JssDecomposition::Create(spec, vertex));
  GPRIV_ASSIGN_OR_RETURN(const double c, dec.RangeWidth(spec.domain(), slope));
  if (!(c > 0.0)) {
    return absl::FailedPreconditionError("published range has zero width");
  }
  return EpsilonFromWidth(c, delta);
}

absl::StatusOr<EpsilonGap> ComputeEpsilonGap(const ObjectiveSpec& spec,
                                             const Eigen::VectorXd& slope,
                                             double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    return absl::InvalidArgumentError("delta must be positive and finite");
  }
  if (spec.domain().IsSingleton()) {
    return absl::FailedPreconditionError("domain is a single point");
  }
  GPRIV_ASSIGN_OR_RETURN(const JssDecomposition dec,
                         EpsilonMinimizingDecomposition(spec, slope));
  GPRIV_ASSIGN_OR_RETURN(const double c, dec.RangeWidth(spec.domain(), slope));
  if (!(c > 0.0)) {
    return absl::FailedPreconditionError("published range has zero width");
  }
  return EpsilonGap{EpsilonFromWidth(c, delta), dec.vertex(), c};
}

absl::StatusOr<IntervalVector> ApplyMechanism(const AgentProblem& problem,
                                              const Mechanism& mech,
                                              const Box& box) {
  GPRIV_RETURN_IF_ERROR(CheckSized(problem, mech));
  std::vector<Interval> out;
  for (int i = 0; i < problem.size(); ++i) {
    GPRIV_ASSIGN_OR_RETURN(
        const JssDecomposition dec,
        EpsilonMinimizingDecomposition(problem.objective(i), mech.slopes()[i]));
    GPRIV_ASSIGN_OR_RETURN(const Interval r,
                           dec.Inclusion(box, mech.slopes()[i]));
    out.push_back(r);
  }
  return IntervalVector::Create(std::move(out));
}

absl::StatusOr<PrivacyReport> ComputePrivacyReport(const AgentProblem& problem,
                                                   const Mechanism& mech) {
  GPRIV_RETURN_IF_ERROR(CheckSized(problem, mech));
  PrivacyReport r;
  r.radii = mech.radii();
  for (int i = 0; i < problem.size(); ++i) {
    auto gap = ComputeEpsilonGap(problem.objective(i), mech.slopes()[i],
                                 mech.radii()[i]);
    if (!gap.ok()) {
      return absl::Status(gap.status().code(),
                          absl::StrCat("agent ", i + 1, ": ",
                                       gap.status().message()));
    }
    r.per_agent_eps.push_back(gap->epsilon);
    r.minimizing_vertex.push_back(gap->vertex);
    r.diam_true.push_back(gap->range_width);
  }
  r.overall_eps =
      *std::max_element(r.per_agent_eps.begin(), r.per_agent_eps.end());
  return r;
}

absl::StatusOr<VicinityCertificate> CheckAdjacency(const AgentProblem& f,
                                                   const AgentProblem& fp,
                                                   const Mechanism& mech) {
  if (f.size() != fp.size() || !SameBox(f.domain(), fp.domain())) {
    return absl::InvalidArgumentError(
        "adjacent problems need equal agent counts and domains");
  }
  GPRIV_RETURN_IF_ERROR(CheckSized(f, mech));
  VicinityCertificate cert;
  for (int i = 0; i < f.size(); ++i) {
    if (!Differs(f.objective(i), fp.objective(i))) continue;
    if (cert.agent_index) {
      return absl::FailedPreconditionError(
          absl::StrCat("agents ", *cert.agent_index + 1, " and ", i + 1,
                       " both differ; adjacency allows one"));
    }
    cert.agent_index = i;
  }
  if (!cert.agent_index) return cert;
  const int i0 = *cert.agent_index;
  GPRIV_ASSIGN_OR_RETURN(cert.sup_distance,
                         SupDistance(f.objective(i0), fp.objective(i0)));
  // Sup distances are computed in floating point; a few ulps over the radius
  // still count as inside.
  cert.within = cert.sup_distance <= mech.radii()[i0] * (1.0 + kRoundingSlack);
  return cert;
}

absl::StatusOr<PrivacyCheck> VerifyPrivacyInequality(
    const AgentProblem& f, const AgentProblem& fp, const Mechanism& mech,
    const IntervalVector& witness) {
  const Box& x0 = f.domain();
  GPRIV_ASSIGN_OR_RETURN(const IntervalVector m, ApplyMechanism(f, mech, x0));
  if (witness.size() != m.size() || !witness.Contains(m)) {
    return absl::FailedPreconditionError(
        "witness interval does not contain M(F, X0)");
  }
  PrivacyCheck check;
  GPRIV_ASSIGN_OR_RETURN(check.certificate, CheckAdjacency(f, fp, mech));
  if (!check.certificate.within) {
    return absl::FailedPreconditionError(absl::StrCat(
        "perturbed problem leaves the vicinity: sup distance ",
        check.certificate.sup_distance, " > ",
        mech.radii()[*check.certificate.agent_index]));
  }
  GPRIV_ASSIGN_OR_RETURN(const IntervalVector mp, ApplyMechanism(fp, mech, x0));
  GPRIV_ASSIGN_OR_RETURN(const std::optional<IntervalVector> cut,
                         Intersect(mp, witness));
  GPRIV_ASSIGN_OR_RETURN(const PrivacyReport report,
                         ComputePrivacyReport(f, mech));
  check.epsilon = report.overall_eps;
  check.lhs = Diameter(cut);
  check.rhs =
      std::exp(check.epsilon * check.certificate.sup_distance) * Diameter(m);
  check.slack = check.rhs - check.lhs;
  check.holds = check.lhs <= check.rhs * (1.0 + kRoundingSlack);
  for (int i = 0; i < m.size(); ++i) {
    const Interval& a = mp[i];
    const Interval& w = witness[i];
    const double width = std::max(0.0, std::min(a.hi, w.hi) - std::max(a.lo, w.lo));
    check.agent_slack.push_back(
        std::exp(report.per_agent_eps[i] * mech.radii()[i]) * m[i].Width() -
        width);
  }
  return check;
}

nlohmann::json PrivacyReportToJson(const PrivacyReport& r) {
  nlohmann::json agents = nlohmann::json::array();
  for (size_t i = 0; i < r.per_agent_eps.size(); ++i) {
    std::vector<int> mask;
    for (bool b : r.minimizing_vertex[i].upper) mask.push_back(b ? 1 : 0);
    agents.push_back({{"agent", i + 1},
                      {"eps", r.per_agent_eps[i]},
                      {"delta", r.radii[i]},
                      {"vertex_slope", VectorToJson(r.minimizing_vertex[i].slope)},
                      {"vertex_mask", mask},
                      {"diam", r.diam_true[i]}});
  }
  return {{"overall_eps", r.overall_eps}, {"agents", agents}};
}

nlohmann::json PrivacyCheckToJson(const PrivacyCheck& c) {
  nlohmann::json j = {{"holds", c.holds},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"slack", c.slack},
                      {"eps", c.epsilon},
                      {"sup_distance", c.certificate.sup_distance},
                      {"agent_slack", c.agent_slack}};
  if (c.certificate.agent_index) j["agent"] = *c.certificate.agent_index + 1;
  return j;
}

}  // namespace gpriv
