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

// Benchmark records and the projection benchmark runner behind
// `cadproj project`.

#ifndef CADPROJ_BENCH_H_
#define CADPROJ_BENCH_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cadproj/probgen.h"
#include "cadproj/projection.h"

namespace cadproj {

inline constexpr char kBenchCsvHeader[] =
    "instance_id,family,n,m,d,delta,method,epsilon,iterations,runtime_ms,"
    "violation,objective,converged,seed";

struct BenchRecord {
  std::string instance_id;
  std::string family;
  int n = 0;
  int m = 0;
  int d = 0;
  double delta = 0.0;
  std::string method;
  double epsilon = 0.0;
  int iterations = 0;  // max over components
  double runtime_ms = 0.0;
  double violation = 0.0;
  std::optional<double> objective;  // empty column when not applicable
  bool converged = false;
  std::uint64_t seed = 0;  // seed of the initial point
};

// One CSV line without the trailing newline. With `include_runtime` false the
// runtime column is written as 0, which makes the output deterministic.
std::string FormatBenchRecord(const BenchRecord& record,
                              bool include_runtime = true);
void WriteBenchCsv(const std::vector<BenchRecord>& records, std::ostream& out,
                   bool include_runtime = true);

struct ProjectBenchConfig {
  SolverConfig solver;
  double delta = 1.0;
  int repeats = 1;
  int jobs = 1;
  std::uint64_t seed = 0;
  // Compare every result with the brute-force oracle (small instances only).
  bool verify = false;
};

struct ProjectRun {
  BenchRecord record;
  int repeat = 0;
  std::vector<double> initial_point;
  std::vector<double> point;
  // ||point - oracle||_inf when verification was requested.
  std::optional<double> oracle_error;
};

// Seed of the initial point for (instance, repeat).
std::uint64_t InitialPointSeed(std::uint64_t base, const ProblemInstance& instance,
                               int repeat);

// Projects `repeats` random initial points x ~ U(-delta, delta)^n per instance.
// Runs are spread over `jobs` threads; the result is sorted by
// (instance_id, repeat) and does not depend on `jobs`. Unconverged runs are
// reported with converged = false. Throws std::invalid_argument for two-set
// Dykstra on an instance with more than two constraints.
std::vector<ProjectRun> RunProjectBenchmark(
    const std::vector<ProblemInstance>& instances,
    const ProjectBenchConfig& config);

double Median(std::vector<double> values);

}  // namespace cadproj

#endif  // CADPROJ_BENCH_H_
