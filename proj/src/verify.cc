// Copyright 2026 The cadproj Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cadproj/verify.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cadproj/gradient.h"
#include "cadproj/oracle.h"
#include "cadproj/partition.h"
#include "cadproj/probgen.h"
#include "cadproj/projection.h"
#include "cadproj/svc.h"

namespace cadproj {
namespace {

constexpr double kOracleTolerance = 1e-4;

double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  double out = 0.0;
  for (size_t j = 0; j < a.size(); ++j) out = std::max(out, std::abs(a[j] - b[j]));
  return out;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double out = 0.0;
  for (size_t j = 0; j < a.size(); ++j) out += a[j] * b[j];
  return out;
}

int NumericalRank(const Eigen::MatrixXd& m, double tolerance = 1e-6) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  int rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()[k] > tolerance) ++rank;
  }
  return rank;
}

std::vector<double> Gaussian(int n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

class Recorder {
 public:
  Recorder(VerifyReport& report, int trial, std::uint64_t seed)
      : report_(report), trial_(trial), seed_(seed) {}

  void Check(bool ok, const std::string& check, const std::string& detail) {
    ++report_.checks;
    if (!ok) report_.failures.push_back({report_.suite, check, trial_, seed_, detail});
  }

 private:
  VerifyReport& report_;
  int trial_;
  std::uint64_t seed_;
};

std::string Describe(double value) {
  std::ostringstream out;
  out.precision(6);
  out << value;
  return out.str();
}

void Count(VerifyReport& report, const std::string& name, int amount = 1) {
  for (auto& [key, value] : report.counters) {
    if (key == name) {
      value += amount;
      return;
    }
  }
  report.counters.emplace_back(name, amount);
}

// A random constraint system for trial `seed`: n in [n_lo, n_hi], m in
// [m_lo, m_hi], degree 3.
GeneratedConstraints RandomSystem(std::uint64_t seed, int n_lo, int n_hi,
                                  int m_lo, int m_hi) {
  std::mt19937_64 rng(DeriveSeed(seed, 100));
  GeneratorConfig config;
  config.n = std::uniform_int_distribution<int>(n_lo, n_hi)(rng);
  config.m = std::uniform_int_distribution<int>(m_lo, m_hi)(rng);
  config.degree = 3;
  config.seed = seed;
  return GenerateConstraints(config);
}

SolverConfig PreciseSolver(Algorithm algorithm, int l_offset = 0) {
  SolverConfig config;
  config.epsilon = 1e-10;
  config.max_iterations = 1000000;
  config.algorithm = algorithm;
  config.l_offset_for_testing = l_offset;
  return config;
}

// Runs every trial, turning an escaped exception into a failure of that
// trial so that one bad seed does not hide the others.
void RunTrials(VerifyReport& report, const VerifyConfig& config,
               const std::function<void(Recorder&, std::uint64_t)>& trial) {
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = TrialSeed(config.seed, t);
    Recorder recorder(report, t, seed);
    try {
      trial(recorder, seed);
    } catch (const std::exception& e) {
      recorder.Check(false, "no exception", e.what());
    }
  }
}

void CompareWithOracle(Recorder& recorder, const std::string& check,
                       const ProjectionResult& result,
                       std::span<const double> oracle) {
  if (!result.all_converged()) {
    recorder.Check(false, check, "did not converge in " +
                                     std::to_string(result.max_iterations()) +
                                     " iterations");
    return;
  }
  const double error = MaxAbsDiff(result.point, oracle);
  recorder.Check(error <= kOracleTolerance, check,
                 "||x - oracle||_inf = " + Describe(error));
}

}  // namespace

std::uint64_t TrialSeed(std::uint64_t base, int trial) {
  return DeriveSeed(base, 0x7000 + static_cast<std::uint64_t>(trial));
}

SparseConstraintSystem UnitHypercube(int n) {
  std::vector<Triplet> triplets;
  std::vector<double> rhs;
  for (int j = 0; j < n; ++j) {
    triplets.push_back({2 * j, j, 1.0});
    rhs.push_back(1.0);
    triplets.push_back({2 * j + 1, j, -1.0});
    rhs.push_back(0.0);
  }
  return SparseConstraintSystem(n, std::move(triplets), std::move(rhs));
}

VerifyReport VerifyTheorem1(const VerifyConfig& config) {
  VerifyReport report;
  report.suite = "theorem1";
  report.trials = config.trials;
  RunTrials(report, config, [&](Recorder& recorder, std::uint64_t seed) {
    const GeneratedConstraints generated = RandomSystem(seed, 2, 10, 1, 8);
    const SparseConstraintSystem& system = generated.system;
    const int n = system.num_variables();
    const std::vector<double> x = GenerateInitialPoint(n, 2.0, DeriveSeed(seed, 101));
    const ConstraintPartition partition = ComputePartition(system);

    const ProjectionResult scaled = CadScaled(
        x, system, partition,
        PreciseSolver(Algorithm::kCadScaled, config.l_offset_for_testing));
    CompareWithOracle(recorder, "cad_scaled == orthogonal projection", scaled,
                      ProjectBruteForce(x, system).point);

    std::vector<double> weights(n);
    for (int j = 0; j < n; ++j) {
      weights[j] = std::max(1, system.constraint_counts()[j]);
    }
    const ProjectionResult raw =
        CadRaw(x, system, partition, PreciseSolver(Algorithm::kCadRaw));
    CompareWithOracle(recorder, "cad_raw == l-weighted projection", raw,
                      ProjectBruteForce(x, system, weights).point);
  });
  return report;
}

VerifyReport VerifyDykstra(const VerifyConfig& config) {
  VerifyReport report;
  report.suite = "dykstra";
  report.trials = config.trials;
  RunTrials(report, config, [&](Recorder& recorder, std::uint64_t seed) {

    const GeneratedConstraints pair = RandomSystem(seed, 2, 10, 2, 2);
    const std::vector<double> x =
        GenerateInitialPoint(pair.system.num_variables(), 2.0, DeriveSeed(seed, 101));
    CompareWithOracle(
        recorder, "two-set == orthogonal projection",
        DykstraTwoSet(x, pair.system, PreciseSolver(Algorithm::kTwoSet)),
        ProjectBruteForce(x, pair.system).point);

    const GeneratedConstraints many =
        RandomSystem(DeriveSeed(seed, 102), 2, 10, 1, 8);
    const std::vector<double> y =
        GenerateInitialPoint(many.system.num_variables(), 2.0, DeriveSeed(seed, 103));
    CompareWithOracle(
        recorder, "simultaneous == orthogonal projection",
        DykstraSimultaneous(y, many.system, PreciseSolver(Algorithm::kSimultaneous)),
        ProjectBruteForce(y, many.system).point);
  });
  return report;
}

namespace {

void CheckHypercube(VerifyReport& report, std::uint64_t seed) {
  std::mt19937_64 rng(DeriveSeed(seed, 200));
  const int n = std::uniform_int_distribution<int>(2, 6)(rng);
  Recorder recorder(report, -1, seed);
  const SparseConstraintSystem cube = UnitHypercube(n);
  const Projector project = MakeCadProjector(cube, 1e-12);
  const std::vector<double> corner(n, 2.0);
  const JacobianOperator exact = ExactJacobian(corner, cube, project);
  const JacobianOperator surrogate = SurrogateJacobian(corner, cube, project);
  const Eigen::MatrixXd e = exact.ToDense();
  recorder.Check(e.cwiseAbs().maxCoeff() <= 1e-12 && NumericalRank(e) == 0,
                 "hypercube corner exact Jacobian is zero",
                 "max |J| = " + Describe(e.cwiseAbs().maxCoeff()));
  recorder.Check(NumericalRank(surrogate.ToDense()) == n - 1,
                 "hypercube corner surrogate rank n-1",
                 "rank " + std::to_string(NumericalRank(surrogate.ToDense())));
  const std::vector<double> g = Gaussian(n, 1.0, rng);
  const std::vector<double> exact_step = exact.Apply(g);
  const std::vector<double> surrogate_step = surrogate.Apply(g);
  recorder.Check(std::sqrt(Dot(exact_step, exact_step)) == 0.0 &&
                     std::sqrt(Dot(surrogate_step, surrogate_step)) > 0.0,
                 "hypercube corner update norms",
                 "exact " + Describe(std::sqrt(Dot(exact_step, exact_step))) +
                     ", surrogate " +
                     Describe(std::sqrt(Dot(surrogate_step, surrogate_step))));
}

}  // namespace

VerifyReport VerifyProp1(const VerifyConfig& config) {
  VerifyReport report;
  report.suite = "prop1";
  report.trials = config.trials;
  CheckHypercube(report, config.seed);
  RunTrials(report, config, [&](Recorder& recorder, std::uint64_t seed) {
    const GeneratedConstraints generated = RandomSystem(seed, 2, 6, 1, 8);
    const SparseConstraintSystem& system = generated.system;
    const int n = system.num_variables();
    const Projector project = MakeCadProjector(system, 1e-12, 1000000);
    std::mt19937_64 rng(DeriveSeed(seed, 104));
    const double delta = std::bernoulli_distribution(0.2)(rng) ? 0.5 : 3.0;
    std::vector<double> x = GenerateInitialPoint(n, delta, DeriveSeed(seed, 105));

    // Step off measure-zero sets where P_C is not differentiable.
    std::optional<JacobianOperator> exact;
    for (int attempt = 0; attempt < 20; ++attempt) {
      if (attempt > 0) {
        const std::vector<double> noise = Gaussian(n, 1e-4, rng);
        for (int j = 0; j < n; ++j) x[j] += noise[j];
      }
      JacobianOperator candidate = ExactJacobian(x, system, project);
      if (!candidate.ambiguous() && !candidate.degenerate()) {
        exact = std::move(candidate);
        break;
      }
    }
    if (!exact) {
      Count(report, "non-differentiable probes skipped");
      return;
    }
    Count(report, "differentiable probes");
    const JacobianOperator surrogate = SurrogateJacobian(x, system, project);
    const bool inside = !surrogate.direction().has_value();
    const int active = static_cast<int>(exact->active_set().size());
    Count(report, inside ? "interior probes"
                         : (active == 1 ? "single-active probes"
                                        : "multi-active probes"));

    const Eigen::MatrixXd s = surrogate.ToDense();
    const Eigen::MatrixXd e = exact->ToDense();
    const int rank = NumericalRank(s);
    recorder.Check(rank == (inside ? n : n - 1), "surrogate rank",
                   "rank " + std::to_string(rank) + ", n = " + std::to_string(n) +
                       (inside ? ", inside" : ", outside"));

    const double gap = (s - e).cwiseAbs().maxCoeff();
    const bool expect_equal = inside || active == 1;
    recorder.Check((gap <= 1e-8) == expect_equal, "exactness",
                   std::to_string(active) + " active, |S - E|_max = " +
                       Describe(gap));

    recorder.Check((e - e.transpose()).cwiseAbs().maxCoeff() <= 1e-8 &&
                       (s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
                   "symmetry", "asymmetric operator");

    const std::vector<double> v = Gaussian(n, 1.0, rng);
    const std::vector<double> ev = exact->Apply(v);
    const std::vector<double> sv = surrogate.Apply(v);
    const double misalignment = std::abs(Dot(ev, sv) - Dot(ev, ev));
    recorder.Check(misalignment <= 1e-8, "alignment",
                   "|<Ev, Sv> - ||Ev||^2| = " + Describe(misalignment));
    recorder.Check(MaxAbsDiff(exact->Apply(ev), ev) <= 1e-8 &&
                       MaxAbsDiff(surrogate.Apply(sv), sv) <= 1e-12,
                   "idempotence", "operator applied twice moved the result");

    const Eigen::MatrixXd fd = FiniteDifferenceJacobian(x, project, 1e-6);
    const double fd_gap = (fd - e).cwiseAbs().maxCoeff();
    recorder.Check(fd_gap <= 1e-5, "finite differences",
                   "|FD - E|_max = " + Describe(fd_gap));

    // Local step equivalence: shrink the step until both moves keep the
    // active set of P_C(x), then both projections must coincide.
    const std::vector<int> base_active = exact->active_set();
    double beta = 1.0;
    bool compared = false;
    for (int halving = 0; halving < 40 && !compared; ++halving, beta *= 0.5) {
      std::vector<double> xe(x), xs(x);
      for (int j = 0; j < n; ++j) {
        xe[j] += beta * ev[j];
        xs[j] += beta * sv[j];
      }
      const JacobianOperator at_e = ExactJacobian(xe, system, project);
      const JacobianOperator at_s = ExactJacobian(xs, system, project);
      if (at_e.ambiguous() || at_s.ambiguous() ||
          at_e.active_set() != base_active || at_s.active_set() != base_active ||
          at_e.direction().has_value() != !inside ||
          at_s.direction().has_value() != !inside) {
        continue;
      }
      const double step_gap =
          MaxAbsDiff(at_e.projected_point(), at_s.projected_point());
      recorder.Check(step_gap <= 1e-6, "local step equivalence",
                     "beta = " + Describe(beta) +
                         ", |P(x + beta Ev) - P(x + beta Sv)|_inf = " +
                         Describe(step_gap));
      compared = true;
    }
    if (!compared) {
      recorder.Check(false, "local step equivalence",
                     "no step kept the active set");
    }

    // grad of 0.5 ||w - P(w)||^2 is w - P(w).
    const std::vector<double> p = project(x);
    auto penalty = [&](std::span<const double> w) {
      const std::vector<double> pw = project(w);
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += (w[j] - pw[j]) * (w[j] - pw[j]);
      return 0.5 * sum;
    };
    double penalty_gap = 0.0;
    for (int j = 0; j < n; ++j) {
      std::vector<double> up(x), down(x);
      up[j] += 1e-6;
      down[j] -= 1e-6;
      const double derivative = (penalty(up) - penalty(down)) / 2e-6;
      penalty_gap = std::max(penalty_gap, std::abs(derivative - (x[j] - p[j])));
    }
    recorder.Check(penalty_gap <= 1e-5, "penalty gradient",
                   "|FD - (w - P(w))|_inf = " + Describe(penalty_gap));
  });
  return report;
}

VerifyReport VerifySvc(const VerifyConfig& config) {
  VerifyReport report;
  report.suite = "svc";
  report.trials = config.trials;
  {
    Recorder recorder(report, -1, config.seed);
    const SparseConstraintSystem box(2, {{0, 0, 1.0}, {1, 1, 1.0}}, {1.0, 1.0});
    const ConstraintPartition partition = ComputePartition(box);
    const std::vector<double> z = {0.0, 0.0}, v = {2.0, 0.5};
    const ClipReport sparse = Clip(z, v, box, partition, ClipMode::kSparse);
    const ClipReport standard = Clip(z, v, box, partition, ClipMode::kStandard);
    recorder.Check(sparse.output == std::vector<double>{1.0, 0.5} &&
                       standard.output == std::vector<double>{1.0, 0.25},
                   "two-component witness",
                   "sparse (" + Describe(sparse.output[0]) + ", " +
                       Describe(sparse.output[1]) + "), standard (" +
                       Describe(standard.output[0]) + ", " +
                       Describe(standard.output[1]) + ")");
  }
  RunTrials(report, config, [&](Recorder& recorder, std::uint64_t seed) {
    const GeneratedConstraints generated = RandomSystem(seed, 2, 10, 1, 8);
    const SparseConstraintSystem& system = generated.system;
    const int n = system.num_variables();
    const ConstraintPartition partition = ComputePartition(system);
    std::mt19937_64 rng(DeriveSeed(seed, 106));
    const std::vector<double> z =
        HitAndRun(system, generated.witness, 20, DeriveSeed(seed, 107), 5.0);
    const std::vector<double> v = Gaussian(n, 2.0, rng);
    double b_max = 0.0;
    for (double b : system.rhs()) b_max = std::max(b_max, std::abs(b));
    const double tolerance = 1e-9 * (1.0 + b_max);

    const ClipReport sparse = Clip(z, v, system, partition, ClipMode::kSparse);
    const ClipReport standard = Clip(z, v, system, partition, ClipMode::kStandard);
    recorder.Check(MaxViolation(system, sparse.output) <= tolerance,
                   "sparse output feasible",
                   "violation " + Describe(MaxViolation(system, sparse.output)));
    recorder.Check(MaxViolation(system, standard.output) <= tolerance,
                   "standard output feasible",
                   "violation " + Describe(MaxViolation(system, standard.output)));

    for (int p = 0; p < partition.size(); ++p) {
      StepBound least = StepBound::Unbounded();
      for (int i : partition.components[p]) {
        least = std::min(least, sparse.alphas[i]);
      }
      recorder.Check(least == sparse.component_alphas[p], "alpha_p is the block minimum",
                     "component " + std::to_string(p));
      recorder.Check(sparse.global_alpha <= sparse.component_alphas[p],
                     "alpha_p >= alpha_C", "component " + std::to_string(p));
      // Maximality: a slightly longer step on this block leaves C.
      const StepBound& alpha = sparse.component_alphas[p];
      if (alpha.bounded() && alpha.value() < 1.0) {
        std::vector<double> longer(z);
        const double factor = alpha.value() + 1e-6 * (1.0 + alpha.value());
        for (int j : partition.component_variables[p]) longer[j] += factor * v[j];
        double worst = -1.0;
        for (int i : partition.components[p]) {
          worst = std::max(worst, system.row(i).Dot(longer) - system.rhs(i));
        }
        recorder.Check(worst > 0.0, "alpha_p is maximal",
                       "component " + std::to_string(p) + " still feasible");
      }
    }
    bool dominates = true;
    for (int j = 0; j < n; ++j) {
      dominates &= std::abs(sparse.output[j] - z[j]) >=
                   std::abs(standard.output[j] - z[j]) * (1.0 - 1e-12);
    }
    recorder.Check(dominates, "sparse reach >= standard reach",
                   "a coordinate moved less in sparse mode");

    std::vector<std::vector<double>> directions;
    for (int k = 0; k < 3; ++k) directions.push_back(Gaussian(n, 2.0, rng));
    const std::vector<double> chained = ClipChain(z, directions, system, partition);
    recorder.Check(MaxViolation(system, chained) <= tolerance, "chain feasible",
                   "violation " + Describe(MaxViolation(system, chained)));
  });
  return report;
}

VerifyReport RunVerifySuite(std::string_view suite, const VerifyConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (suite == "theorem1") return VerifyTheorem1(config);
  if (suite == "dykstra") return VerifyDykstra(config);
  if (suite == "prop1") return VerifyProp1(config);
  if (suite == "svc") return VerifySvc(config);
  throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
}

}  // namespace cadproj
