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

#include "cadproj/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "cadproj/descent.h"
#include "cadproj/format.h"
#include "cadproj/oracle.h"
#include "cadproj/parallel.h"
#include "cadproj/partition.h"

namespace cadproj {

std::string FormatBenchRecord(const BenchRecord& r, bool include_runtime) {
  std::string line;
  line += r.instance_id + ',' + r.family + ',' + std::to_string(r.n) + ',' +
          std::to_string(r.m) + ',' + std::to_string(r.d) + ',' +
          FormatDouble(r.delta) + ',' + r.method + ',' +
          FormatDouble(r.epsilon) + ',' + std::to_string(r.iterations) + ',' +
          FormatDouble(include_runtime ? r.runtime_ms : 0.0) + ',' +
          FormatDouble(r.violation) + ',';
  if (r.objective) line += FormatDouble(*r.objective);
  line += ',';
  line += r.converged ? "true" : "false";
  line += ',' + std::to_string(r.seed);
  return line;
}

void WriteBenchCsv(const std::vector<BenchRecord>& records, std::ostream& out,
                   bool include_runtime) {
  out << kBenchCsvHeader << '\n';
  for (const BenchRecord& r : records) {
    out << FormatBenchRecord(r, include_runtime) << '\n';
  }
}

std::uint64_t InitialPointSeed(std::uint64_t base,
                               const ProblemInstance& instance, int repeat) {
  return DeriveSeed(DeriveSeed(base, instance.meta.seed),
                    1000 + static_cast<std::uint64_t>(repeat));
}

std::vector<ProjectRun> RunProjectBenchmark(
    const std::vector<ProblemInstance>& instances,
    const ProjectBenchConfig& config) {
  config.solver.Validate();
  if (config.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (config.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  for (const ProblemInstance& instance : instances) {
    RequireValid(instance.system);
    if (config.solver.algorithm == Algorithm::kTwoSet &&
        instance.system.num_constraints() > 2) {
      throw std::invalid_argument("two-set needs at most 2 constraints; " +
                                  instance.id() + " has " +
                                  std::to_string(instance.system.num_constraints()));
    }
  }

  // Sort instance order once so that the output order is fixed.
  std::vector<int> order(instances.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return instances[a].id() < instances[b].id();
  });
  std::vector<ConstraintPartition> partitions(instances.size());
  for (size_t k = 0; k < instances.size(); ++k) {
    partitions[k] = ComputePartition(instances[k].system);
  }

  const int repeats = config.repeats;
  std::vector<ProjectRun> runs(order.size() * repeats);
  SolverConfig solver = config.solver;
  solver.threads = 1;
  solver.observer = nullptr;
  ParallelFor(static_cast<int>(runs.size()), config.jobs, [&](int slot) {
    const ProblemInstance& instance = instances[order[slot / repeats]];
    const ConstraintPartition& partition = partitions[order[slot / repeats]];
    const int repeat = slot % repeats;
    const int n = instance.system.num_variables();
    ProjectRun& run = runs[slot];
    run.repeat = repeat;
    const std::uint64_t seed = InitialPointSeed(config.seed, instance, repeat);
    run.initial_point = GenerateInitialPoint(n, config.delta, seed);

    const auto start = std::chrono::steady_clock::now();
    ProjectionResult result =
        Project(run.initial_point, instance.system, partition, solver);
    const auto stop = std::chrono::steady_clock::now();

    BenchRecord& r = run.record;
    r.instance_id = instance.id();
    r.family = instance.meta.family;
    r.n = n;
    r.m = instance.system.num_constraints();
    r.d = instance.meta.degree;
    r.delta = config.delta;
    r.method = std::string(AlgorithmName(solver.algorithm));
    r.epsilon = solver.epsilon;
    r.iterations = result.max_iterations();
    r.runtime_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    r.violation = result.violation;
    r.converged = result.all_converged();
    r.seed = seed;
    if (!std::holds_alternative<std::monostate>(instance.objective)) {
      try {
        r.objective = EvaluateObjective(instance.objective, result.point).value;
      } catch (const std::domain_error&) {
        // Left empty: an unconverged point can leave the objective's domain.
      }
    }
    if (config.verify) {
      const OracleSolution oracle =
          ProjectBruteForce(run.initial_point, instance.system);
      double error = 0.0;
      for (int j = 0; j < n; ++j) {
        error = std::max(error, std::abs(result.point[j] - oracle.point[j]));
      }
      run.oracle_error = error;
    }
    run.point = std::move(result.point);
  });
  return runs;
}

double Median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of nothing");
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace cadproj
