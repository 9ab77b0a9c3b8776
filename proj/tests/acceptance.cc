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

// Acceptance gate. Runs every criterion at its stated size and tolerance,
// prints one PASS/FAIL line each and exits nonzero if any fails.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cadproj/bench.h"
#include "cadproj/descent.h"
#include "cadproj/gradient.h"
#include "cadproj/instance_io.h"
#include "cadproj/oracle.h"
#include "cadproj/parallel.h"
#include "cadproj/probgen.h"
#include "cadproj/projection.h"
#include "cadproj/verify.h"

namespace cadproj {
namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int Jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string Describe(const VerifyReport& r) {
  std::ostringstream out;
  out << r.trials << " trials, " << r.checks << " checks, " << r.failures.size()
      << " failures";
  for (const auto& [name, value] : r.counters) out << ", " << name << " " << value;
  if (!r.failures.empty()) {
    const VerifyFailure& f = r.failures.front();
    out << "; first: " << f.check << " (trial " << f.trial << ", seed " << f.seed
        << ") " << f.detail;
  }
  return out.str();
}

int Counter(const VerifyReport& r, const std::string& name) {
  for (const auto& [key, value] : r.counters) {
    if (key == name) return value;
  }
  return 0;
}

Outcome Criterion1() {
  VerifyConfig config;
  config.trials = 200;
  const auto start = std::chrono::steady_clock::now();
  const VerifyReport r = VerifyTheorem1(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream out;
  out << Describe(r) << ", " << seconds << " s";
  return {r.passed() && seconds < 60.0, out.str()};
}

Outcome Criterion2() {
  VerifyConfig config;
  config.trials = 100;
  const VerifyReport r = VerifyDykstra(config);
  return {r.passed(), Describe(r)};
}

// Rank of the exact Jacobian at the corner of [0, 1]^n, probed directly on
// top of the suite's own hypercube check.
int HypercubeExactRank(int n) {
  const SparseConstraintSystem cube = UnitHypercube(n);
  const std::vector<double> x(n, 2.0);
  const Eigen::MatrixXd j =
      ExactJacobian(x, cube, MakeCadProjector(cube, 1e-12)).ToDense();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(j);
  lu.setThreshold(1e-12);
  return j.cwiseAbs().maxCoeff() == 0.0 ? 0 : static_cast<int>(lu.rank());
}

Outcome Criterion3() {
  VerifyConfig config;
  config.trials = 100;
  const VerifyReport r = VerifyProp1(config);
  const int differentiable = Counter(r, "differentiable probes");
  bool corners = true;
  for (int n = 2; n <= 6; ++n) corners &= HypercubeExactRank(n) == 0;
  std::ostringstream out;
  out << Describe(r) << ", hypercube exact rank 0 for n=2..6: "
      << (corners ? "yes" : "no");
  return {r.passed() && differentiable >= 100 && corners, out.str()};
}

std::vector<ProblemInstance> SparseInstances(int count, int n, int m,
                                             std::uint64_t seed0) {
  std::vector<ProblemInstance> out;
  for (int k = 0; k < count; ++k) {
    GeneratorConfig c;
    c.n = n;
    c.m = m;
    c.degree = 3;
    c.offset = false;
    c.seed = seed0 + k;
    out.push_back(GenerateConstraintsOnly(c));
  }
  return out;
}

double MedianIterations(const std::vector<ProblemInstance>& instances,
                        Algorithm algorithm, double epsilon, double delta,
                        int* unconverged) {
  ProjectBenchConfig config;
  config.solver.algorithm = algorithm;
  config.solver.epsilon = epsilon;
  config.solver.max_iterations = 1000000;
  config.delta = delta;
  config.jobs = Jobs();
  config.seed = 1;
  std::vector<double> iterations;
  for (const ProjectRun& run : RunProjectBenchmark(instances, config)) {
    iterations.push_back(run.record.iterations);
    if (!run.record.converged) ++*unconverged;
  }
  return Median(iterations);
}

Outcome Criterion4() {
  const auto instances = SparseInstances(30, 200, 150, 4000);
  int unconverged = 0;
  const double cad = MedianIterations(instances, Algorithm::kCadScaled, 1e-6, 1.0,
                                      &unconverged);
  const double simul = MedianIterations(instances, Algorithm::kSimultaneous, 1e-6,
                                        1.0, &unconverged);
  std::ostringstream out;
  out << "median iterations cad " << cad << " vs simultaneous " << simul
      << ", unconverged runs " << unconverged;
  return {cad < simul && unconverged == 0, out.str()};
}

Outcome Criterion5() {
  const std::vector<double> deltas = {0.25, 0.5, 1.0, 2.0};
  const std::vector<double> epsilons = {1e-2, 1e-3, 1e-4};
  const auto instances = SparseInstances(20, 200, 150, 5000);
  std::vector<std::vector<double>> grid(epsilons.size(),
                                        std::vector<double>(deltas.size()));
  int unconverged = 0;
  for (size_t e = 0; e < epsilons.size(); ++e) {
    for (size_t d = 0; d < deltas.size(); ++d) {
      grid[e][d] = MedianIterations(instances, Algorithm::kCadScaled, epsilons[e],
                                    deltas[d], &unconverged);
    }
  }
  bool monotone = unconverged == 0;
  std::ostringstream out;
  out << "median iterations (rows eps 1e-2,1e-3,1e-4; columns delta "
         "0.25,0.5,1,2):";
  for (size_t e = 0; e < epsilons.size(); ++e) {
    out << " [";
    for (size_t d = 0; d < deltas.size(); ++d) {
      out << (d ? " " : "") << grid[e][d];
      if (d > 0) monotone &= grid[e][d] >= grid[e][d - 1];
      if (e > 0) monotone &= grid[e][d] >= grid[e - 1][d];
    }
    out << "]";
  }
  return {monotone, out.str()};
}

Outcome Criterion6() {
  VerifyConfig config;
  config.trials = 100;
  const VerifyReport r = VerifySvc(config);
  return {r.passed(), Describe(r)};
}

ProblemInstance Lp(int n, int m, std::uint64_t seed) {
  GeneratorConfig c;
  c.n = n;
  c.m = m;
  c.seed = seed;
  return GenerateLp(c);
}

// Runs one descent per seed in parallel.
std::vector<Trace> DescendAll(const std::vector<ProblemInstance>& instances,
                              const DescentConfig& base) {
  std::vector<Trace> traces(instances.size());
  ParallelFor(static_cast<int>(instances.size()), Jobs(), [&](int k) {
    DescentConfig c = base;
    c.seed = instances[k].meta.seed;
    traces[k] = Descend(instances[k], c);
  });
  return traces;
}

std::vector<ProblemInstance> Lps(int count, int n, int m) {
  std::vector<ProblemInstance> out;
  for (int k = 0; k < count; ++k) out.push_back(Lp(n, m, k));
  return out;
}

int Truncated(const std::vector<Trace>& traces) {
  return static_cast<int>(std::count_if(traces.begin(), traces.end(),
                                        [](const Trace& t) { return t.truncated; }));
}

Outcome Criterion7() {
  const auto instances = Lps(20, 8, 6);
  DescentConfig config;
  config.eta = 0.05;
  config.iterations = 200;
  std::vector<double> without, with;
  config.penalty = 0.0;
  const std::vector<Trace> t0 = DescendAll(instances, config);
  config.penalty = 1.0;
  const std::vector<Trace> t1 = DescendAll(instances, config);
  for (const Trace& t : t0) without.push_back(t.MedianCadIterations());
  for (const Trace& t : t1) with.push_back(t.MedianCadIterations());
  const int truncated = Truncated(t0) + Truncated(t1);
  std::ostringstream out;
  out << "median per-step cad iterations c_h=0 " << Median(without) << " vs c_h=1 "
      << Median(with) << ", truncated traces " << truncated;
  return {Median(with) < Median(without) && truncated == 0, out.str()};
}

// One descent step on [0, 1]^n from w = (2, ..., 2) with a linear objective
// whose gradient is not parallel to the outward normal of the corner.
double HypercubeUpdateNorm(int n, JacobianKind kind) {
  ProblemInstance inst;
  inst.system = UnitHypercube(n);
  LinearObjective objective;
  for (int j = 0; j < n; ++j) objective.c.push_back(1.0 + j);
  inst.objective = objective;
  inst.meta.family = "hypercube";
  DescentConfig config;
  config.gradient_kind = kind;
  config.iterations = 1;
  config.epsilon = 1e-10;
  const Trace t = Descend(inst, config, std::vector<double>(n, 2.0));
  if (t.rows.empty()) return NAN;
  return t.rows.front().update_norm;
}

Outcome Criterion8() {
  const auto instances = Lps(20, 8, 6);
  DescentConfig config;
  config.eta = 0.05;
  config.iterations = 200;
  const std::vector<Trace> surrogate = DescendAll(instances, config);
  config.gradient_kind = JacobianKind::kExact;
  const std::vector<Trace> exact = DescendAll(instances, config);
  std::vector<double> fs, fe;
  for (const Trace& t : surrogate) fs.push_back(t.FinalObjective());
  for (const Trace& t : exact) fe.push_back(t.FinalObjective());
  bool corners = true;
  std::ostringstream out;
  out << "median final objective surrogate " << Median(fs) << " vs exact "
      << Median(fe) << ", truncated " << Truncated(surrogate) + Truncated(exact)
      << "; hypercube update norms (exact/surrogate):";
  for (int n = 2; n <= 5; ++n) {
    const double e = HypercubeUpdateNorm(n, JacobianKind::kExact);
    const double s = HypercubeUpdateNorm(n, JacobianKind::kSurrogate);
    corners &= e == 0.0 && s > 0.0;
    out << " n=" << n << " " << e << "/" << s;
  }
  return {Median(fs) >= Median(fe) && corners &&
              Truncated(surrogate) + Truncated(exact) == 0,
          out.str()};
}

// Fraction of the optimum reached, 1 - (opt - f) / |opt|; equals f / opt for
// a positive optimum and stays meaningful when the optimum is negative.
double Reached(double f, double opt) { return 1.0 - (opt - f) / std::abs(opt); }

Outcome Criterion9() {
  const int n = 8, m = 16;
  std::vector<ProblemInstance> instances;
  std::vector<double> optimum;
  int skipped = 0;
  for (std::uint64_t seed = 0; instances.size() < 20 && seed < 10000; ++seed) {
    ProblemInstance inst = Lp(n, m, seed);
    const auto opt = SolveLpByVertexEnumeration(
        std::get<LinearObjective>(inst.objective).c, inst.system);
    // Skip LPs without a certified vertex optimum (unbounded or degenerate).
    if (!opt || opt->value == 0.0) {
      ++skipped;
      continue;
    }
    instances.push_back(std::move(inst));
    optimum.push_back(opt->value);
  }
  DescentConfig config;
  config.eta = 0.2;
  config.iterations = 500;
  const std::vector<Trace> traces = DescendAll(instances, config);
  std::vector<double> final_ratio, best_ratio;
  for (size_t k = 0; k < traces.size(); ++k) {
    final_ratio.push_back(Reached(traces[k].FinalObjective(), optimum[k]));
    best_ratio.push_back(Reached(traces[k].BestObjective(), optimum[k]));
  }
  std::ostringstream out;
  out << instances.size() << " bounded LPs (n=8, m=16, " << skipped
      << " seeds skipped), median fraction of optimum: final "
      << Median(final_ratio) << ", best " << Median(best_ratio) << ", truncated "
      << Truncated(traces);
  return {instances.size() == 20 && Median(best_ratio) >= 0.9, out.str()};
}

// Independent capacity for the transmit power check.
std::vector<double> Capacity(const TransmitPowerObjective& obj, int n,
                             std::span<const double> x) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (const Triplet& t : obj.gains) h(t.row, t.col) = t.value;
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) {
    const double interference =
        h.row(i).dot(Eigen::Map<const Eigen::VectorXd>(x.data(), n)) - h(i, i) * x[i] +
        obj.sigma * obj.sigma;
    c[i] = std::log(1.0 + h(i, i) * x[i] / interference);
  }
  return c;
}

Outcome Criterion10() {
  double worst_norm = 0.0, worst_slack = INFINITY;
  bool reproducible = true;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (bool offset : {true, false}) {
      GeneratorConfig c;
      c.n = 20 + 10 * static_cast<int>(seed % 7);
      c.m = (3 * c.n) / 4;
      c.degree = 1 + seed % 5;
      c.offset = offset;
      c.seed = seed;
      const GeneratedConstraints g = GenerateConstraints(c);
      const GeneratedConstraints again = GenerateConstraints(c);
      reproducible &= g.system == again.system && g.witness == again.witness;
      const std::vector<double> center =
          offset ? g.witness : std::vector<double>(c.n, 0.0);
      const std::vector<double> ac = g.system.Multiply(center);
      for (int i = 0; i < c.m; ++i) {
        worst_norm = std::max(worst_norm, std::abs(g.system.row_norms()[i] - 1.0));
        // Distance from the center to hyperplane i; the ball of radius 0.1
        // is inside C iff every one is >= 0.1.
        worst_slack = std::min(worst_slack,
                               (g.system.rhs(i) - ac[i]) / g.system.row_norms()[i]);
      }
    }
    for (const char* family : {"lp", "quad-er", "quad-ba", "power"}) {
      GeneratorConfig c;
      c.n = 15;
      c.m = 11;
      c.seed = seed;
      reproducible &= InstanceToJson(GenerateFamily(family, c)) ==
                      InstanceToJson(GenerateFamily(family, c));
    }
  }

  const int n = 16;
  GeneratorConfig pc;
  pc.n = n;
  pc.degree = 5;
  pc.seed = 77;
  const ProblemInstance power = GenerateTransmitPower(pc);
  const auto& obj = std::get<TransmitPowerObjective>(power.objective);
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> draw(0.0, obj.p_max);
  int mismatches = 0, compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> x(n);
    for (double& v : x) v = draw(rng);
    const std::vector<double> c = Capacity(obj, n, x);
    const std::vector<double> ax = power.system.Multiply(x);
    for (int i = 0; i < n; ++i) {
      // Points within rounding of the boundary cannot be classified.
      if (std::abs(c[i] - obj.requirements[i]) < 1e-9) continue;
      ++compared;
      if ((c[i] >= obj.requirements[i]) != (ax[i] <= power.system.rhs(i))) {
        ++mismatches;
      }
    }
  }
  std::ostringstream out;
  out << "max |row norm - 1| " << worst_norm << ", min ball slack " << worst_slack
      << ", reproducible " << (reproducible ? "yes" : "no")
      << ", transmit power mismatches " << mismatches << "/" << compared;
  return {worst_norm <= 1e-12 && worst_slack >= 0.1 - 1e-12 && reproducible &&
              mismatches == 0 && compared > 15000,
          out.str()};
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome Criterion11() {
  const char* cli = std::getenv("CADPROJ_CLI_PATH");
#ifdef CADPROJ_CLI_PATH
  if (cli == nullptr) cli = CADPROJ_CLI_PATH;
#endif
  if (cli == nullptr) return {false, "CADPROJ_CLI_PATH is not set"};
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "cadproj_acceptance_jobs";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string files;
  for (int k = 0; k < 12; ++k) {
    GeneratorConfig c;
    c.n = 120;
    c.m = 90;
    c.seed = 900 + k;
    const ProblemInstance inst = GenerateLp(c);
    const fs::path path = dir / (inst.id() + ".json");
    WriteInstance(inst, path);
    files += " '" + path.string() + "'";
  }
  std::string detail;
  bool identical = true;
  std::vector<std::string> points, csvs;
  for (int jobs : {1, 8}) {
    const fs::path pts = dir / ("points-" + std::to_string(jobs) + ".csv");
    const fs::path csv = dir / ("bench-" + std::to_string(jobs) + ".csv");
    const std::string command = std::string("'") + cli + "' project --instance" +
                                files + " --repeats 3 --jobs " + std::to_string(jobs) +
                                " --no-runtime --points '" + pts.string() +
                                "' --csv '" + csv.string() + "'";
    if (std::system(command.c_str()) != 0) {
      return {false, "command failed: " + command};
    }
    points.push_back(Slurp(pts));
    csvs.push_back(Slurp(csv));
  }
  identical = !points[0].empty() && points[0] == points[1] && csvs[0] == csvs[1];
  std::ostringstream out;
  out << "points files " << points[0].size() << " and " << points[1].size()
      << " bytes, " << (identical ? "identical" : "different");
  fs::remove_all(dir);
  return {identical, out.str()};
}

}  // namespace
}  // namespace cadproj

int main() {
  using cadproj::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"cad matches the orthogonal and l-weighted oracles", cadproj::Criterion1},
      {"two-set and simultaneous Dykstra match the oracle", cadproj::Criterion2},
      {"projection Jacobian properties", cadproj::Criterion3},
      {"cad needs fewer iterations than simultaneous Dykstra", cadproj::Criterion4},
      {"cad iterations grow with delta and with 1/epsilon", cadproj::Criterion5},
      {"sparse vector clipping", cadproj::Criterion6},
      {"the penalty term lowers per-step cad iterations", cadproj::Criterion7},
      {"surrogate descent is no worse than exact descent", cadproj::Criterion8},
      {"surrogate descent reaches 90% of the lp optimum", cadproj::Criterion9},
      {"generator contracts", cadproj::Criterion10},
      {"project output is independent of --jobs", cadproj::Criterion11},
  };
  int failed = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      outcome = criteria[k].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.passed) ++failed;
    std::printf("%s criterion %zu: %s [%s] (%.1f s)\n",
                outcome.passed ? "PASS" : "FAIL", k + 1, criteria[k].first,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
