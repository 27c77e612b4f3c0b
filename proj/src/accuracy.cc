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

#include "gpriv/accuracy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "gpriv/kernels/kernels.h"
#include "gpriv/simplex.h"
#include "gpriv/status_macros.h"

namespace gpriv {
namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kRefineTol = 1e-6;

absl::Status CheckSlopes(std::span<const Eigen::VectorXd> slopes,
                         const Box& domain) {
  if (slopes.empty()) return absl::InvalidArgumentError("no slopes given");
  for (size_t i = 0; i < slopes.size(); ++i) {
    if (slopes[i].size() != domain.dim()) {
      return absl::InvalidArgumentError(
          absl::StrCat("slope ", i + 1, " has dimension ", slopes[i].size(),
                       ", domain ", domain.dim()));
    }
  }
  return absl::OkStatus();
}

// Solves max ||y - z||_inf over X0 x X0 with extra rows on (y - z).
absl::StatusOr<double> MaxSeparation(const Box& domain,
                                     std::span<const Eigen::VectorXd> rows,
                                     RowSense sense) {
  const int n = domain.dim();
  const int theta = 2 * n;
  LinearProgram base = LinearProgram::WithVariables(2 * n + 1);
  base.maximize = true;
  base.cost[theta] = 1.0;
  base.lower.head(n) = domain.lo();
  base.upper.head(n) = domain.hi();
  base.lower.segment(n, n) = domain.lo();
  base.upper.segment(n, n) = domain.hi();
  for (const Eigen::VectorXd& m : rows) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(2 * n + 1);
    row.head(n) = m.transpose();
    row.segment(n, n) = -m.transpose();
    base.AddRow(row, sense, 0.0);
  }
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    for (double s : {1.0, -1.0}) {
      LinearProgram lp = base;
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(2 * n + 1);
      row[theta] = 1.0;
      row[j] = -s;
      row[n + j] = s;
      lp.AddRow(row, RowSense::kLessEqual, 0.0);
      GPRIV_ASSIGN_OR_RETURN(const LpSolution sol, SolveLinearProgram(lp));
      if (sol.status != LpStatus::kOptimal) {
        return absl::InternalError(absl::StrCat(
            "accuracy bound program not optimal: ",
            std::string(LpStatusName(sol.status))));
      }
      best = std::max(best, sol.objective);
    }
  }
  return best;
}

template <typename F>
double GoldenSection(F&& f, double a, double b) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > kRefineTol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

struct Candidate {
  Eigen::VectorXd x;
  double value;
};

std::vector<Candidate> GridCandidates1d(const ObjectiveSpec& spec, int count) {
  const double lo = spec.domain().lo()[0], hi = spec.domain().hi()[0];
  const double h = (hi - lo) / (count - 1);
  std::vector<double> xs(count), fs(count);
  for (int k = 0; k < count; ++k) xs[k] = k + 1 == count ? hi : lo + k * h;
  EvaluateBatch(spec, xs, fs);
  const kernels::MinMax mm = kernels::MinMaxReduce(fs);
  const double cut = mm.min + 1e-3 * (1.0 + std::abs(mm.min));

  auto f1 = [&spec](double t) {
    return spec.Evaluate(Eigen::VectorXd::Constant(1, t));
  };
  std::vector<Candidate> out;
  for (int k = 0; k < count; ++k) {
    if (fs[k] > cut) continue;
    if (k > 0 && fs[k - 1] < fs[k]) continue;
    if (k + 1 < count && fs[k + 1] < fs[k]) continue;
    const double a = xs[std::max(k - 1, 0)];
    const double b = xs[std::min(k + 1, count - 1)];
    double t = GoldenSection(f1, a, b);
    double ft = f1(t);
    if (fs[k] < ft) {
      t = xs[k];
      ft = fs[k];
    }
    out.push_back({Eigen::VectorXd::Constant(1, t), ft});
  }
  return out;
}

std::vector<Candidate> GridCandidates2d(const ObjectiveSpec& spec, int per_axis) {
  const Box& box = spec.domain();
  const Eigen::VectorXd h = box.Widths() / (per_axis - 1);
  auto coord = [&](int axis, int k) {
    return k + 1 == per_axis ? box.hi()[axis] : box.lo()[axis] + k * h[axis];
  };
  std::vector<double> fs(static_cast<size_t>(per_axis) * per_axis);
  Eigen::VectorXd x(2);
  for (int a = 0; a < per_axis; ++a) {
    x[0] = coord(0, a);
    for (int b = 0; b < per_axis; ++b) {
      x[1] = coord(1, b);
      fs[static_cast<size_t>(a) * per_axis + b] = spec.Evaluate(x);
    }
  }
  const kernels::MinMax mm = kernels::MinMaxReduce(fs);
  const double cut = mm.min + 1e-3 * (1.0 + std::abs(mm.min));
  std::vector<Candidate> out;
  for (int a = 0; a < per_axis; ++a) {
    for (int b = 0; b < per_axis; ++b) {
      const double v = fs[static_cast<size_t>(a) * per_axis + b];
      if (v > cut) continue;
      bool local = true;
      for (int da = -1; da <= 1 && local; ++da) {
        for (int db = -1; db <= 1; ++db) {
          const int na = a + da, nb = b + db;
          if ((da == 0 && db == 0) || na < 0 || nb < 0 || na >= per_axis ||
              nb >= per_axis) {
            continue;
          }
          if (fs[static_cast<size_t>(na) * per_axis + nb] < v) {
            local = false;
            break;
          }
        }
      }
      if (!local) continue;
      Eigen::VectorXd p(2);
      p << coord(0, a), coord(1, b);
      Eigen::VectorXd lo = (p - h).cwiseMax(box.lo());
      Eigen::VectorXd hi = (p + h).cwiseMin(box.hi());
      double fp = v;
      for (int sweep = 0; sweep < 50; ++sweep) {
        const Eigen::VectorXd before = p;
        for (int axis = 0; axis < 2; ++axis) {
          Eigen::VectorXd q = p;
          auto f = [&](double t) {
            q[axis] = t;
            return spec.Evaluate(q);
          };
          const double t = GoldenSection(f, lo[axis], hi[axis]);
          q[axis] = t;
          const double ft = spec.Evaluate(q);
          if (ft <= fp) {
            p = q;
            fp = ft;
          }
        }
        if ((p - before).lpNorm<Eigen::Infinity>() <= kRefineTol) break;
      }
      out.push_back({p, fp});
    }
  }
  return out;
}

}  // namespace

double DeltaStar(const Eigen::VectorXd& m_tilde, const Box& domain) {
  const Eigen::VectorXd pos = m_tilde.cwiseMax(0.0);
  const Eigen::VectorXd neg = pos - m_tilde;
  return std::max(std::abs(pos.dot(domain.hi()) - neg.dot(domain.lo())),
                  std::abs(pos.dot(domain.lo()) - neg.dot(domain.hi())));
}

bool AdmissibleSlope(const Eigen::VectorXd& m_tilde, double delta_star,
                     const Box& domain) {
  return m_tilde.cwiseAbs().dot(domain.Widths()) <= delta_star;
}

absl::StatusOr<double> UpperBound(std::span<const Eigen::VectorXd> slopes,
                                  const Box& domain) {
  GPRIV_RETURN_IF_ERROR(CheckSlopes(slopes, domain));
  return MaxSeparation(domain, slopes, RowSense::kLessEqual);
}

absl::StatusOr<double> SignCorrectedUpperBound(
    std::span<const Eigen::VectorXd> slopes, const Box& domain) {
  GPRIV_RETURN_IF_ERROR(CheckSlopes(slopes, domain));
  Eigen::VectorXd total = Eigen::VectorXd::Zero(domain.dim());
  for (const Eigen::VectorXd& m : slopes) total += m;
  const Eigen::VectorXd rows[1] = {total};
  return MaxSeparation(domain, rows, RowSense::kGreaterEqual);
}

absl::StatusOr<double> EmpiricalError(
    std::span<const Eigen::VectorXd> reference,
    std::span<const Eigen::VectorXd> perturbed) {
  if (reference.empty() || perturbed.empty()) {
    return absl::InvalidArgumentError("optimizer sets must be nonempty");
  }
  double e = 0.0;
  for (const Eigen::VectorXd& x : reference) {
    for (const Eigen::VectorXd& y : perturbed) {
      if (x.size() != y.size()) {
        return absl::InvalidArgumentError("optimizer dimension mismatch");
      }
      e = std::max(e, (x - y).lpNorm<Eigen::Infinity>());
    }
  }
  return e;
}

absl::StatusOr<double> NecessaryConditionValue(
    std::span<const Eigen::VectorXd> slopes,
    std::span<const Eigen::VectorXd> reference,
    std::span<const Eigen::VectorXd> perturbed) {
  if (slopes.empty() || reference.empty() || perturbed.empty()) {
    return absl::InvalidArgumentError("slopes and optimizer sets must be nonempty");
  }
  Eigen::VectorXd total = Eigen::VectorXd::Zero(slopes.front().size());
  for (const Eigen::VectorXd& m : slopes) {
    if (m.size() != total.size()) {
      return absl::InvalidArgumentError("slope dimension mismatch");
    }
    total += m;
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& x : reference) {
    for (const Eigen::VectorXd& y : perturbed) {
      if (x.size() != total.size() || y.size() != total.size()) {
        return absl::InvalidArgumentError("optimizer dimension mismatch");
      }
      worst = std::max(worst, total.dot(x - y));
    }
  }
  return worst;
}

absl::StatusOr<std::vector<Eigen::VectorXd>> CertifyMinimizers(
    const ObjectiveSpec& spec, int grid_points) {
  const int n = spec.dim();
  if (n > kMaxCertifiedDim) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "grid certification supports dimension <= ", kMaxCertifiedDim,
        ", got ", n));
  }
  if (grid_points == 0) {
    grid_points = n == 1 ? kDefaultGridPoints1d : kDefaultGridPoints2d;
  }
  if (grid_points < 3) {
    return absl::InvalidArgumentError("grid needs at least 3 points per axis");
  }
  std::vector<Candidate> cands = n == 1 ? GridCandidates1d(spec, grid_points)
                                        : GridCandidates2d(spec, grid_points);
  double best = std::numeric_limits<double>::infinity();
  for (const Candidate& c : cands) best = std::min(best, c.value);
  const double keep = best + 1e-6 * (1.0 + std::abs(best));
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::lexicographical_compare(
                  a.x.data(), a.x.data() + a.x.size(), b.x.data(),
                  b.x.data() + b.x.size());
            });
  const double merge = 1e-3 * std::max(Diameter(spec.domain()), 1e-12);
  std::vector<Candidate> kept;
  for (const Candidate& c : cands) {
    if (c.value > keep) continue;
    bool dup = false;
    for (Candidate& k : kept) {
      if ((k.x - c.x).lpNorm<Eigen::Infinity>() <= merge) {
        if (c.value < k.value) k = c;
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(c);
  }
  std::vector<Eigen::VectorXd> out;
  for (Candidate& c : kept) out.push_back(std::move(c.x));
  return out;
}

absl::StatusOr<std::vector<Eigen::VectorXd>> CertifyReferenceOptimizers(
    const AgentProblem& problem, int grid_points) {
  GPRIV_ASSIGN_OR_RETURN(const ObjectiveSpec sum, SumObjective(problem));
  return CertifyMinimizers(sum, grid_points);
}

absl::StatusOr<AccuracyReport> ComputeAccuracyReport(
    std::span<const Eigen::VectorXd> slopes, const Box& domain) {
  AccuracyReport r;
  GPRIV_ASSIGN_OR_RETURN(r.ub, UpperBound(slopes, domain));
  GPRIV_ASSIGN_OR_RETURN(r.ub_sign_corrected,
                         SignCorrectedUpperBound(slopes, domain));
  for (const Eigen::VectorXd& m : slopes) {
    const double ds = DeltaStar(m, domain);
    r.delta_star.push_back(ds);
    r.admissible.push_back(AdmissibleSlope(m, ds, domain));
  }
  return r;
}

nlohmann::json AccuracyReportToJson(const AccuracyReport& r) {
  auto points = [](const std::vector<Eigen::VectorXd>& xs) {
    nlohmann::json a = nlohmann::json::array();
    for (const Eigen::VectorXd& x : xs) a.push_back(VectorToJson(x));
    return a;
  };
  nlohmann::json j = {{"delta_star", r.delta_star},
                      {"admissible", r.admissible},
                      {"ub", r.ub},
                      {"ub_sign_corrected", r.ub_sign_corrected},
                      {"reference_optimizers", points(r.reference_optimizers)},
                      {"perturbed_optimizers", points(r.perturbed_optimizers)}};
  if (r.empirical_error) j["empirical_error"] = *r.empirical_error;
  if (r.necessary_condition) j["necessary_condition"] = *r.necessary_condition;
  return j;
}

}  // namespace gpriv
