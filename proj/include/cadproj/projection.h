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

// Dykstra-family projections onto polytopes {x : Ax <= b}.
//
// The simultaneous and component-averaged solvers stop on primal feasibility
// only: the iterate x^(k) is returned as soon as
// max_i (A_i x^(k) - b_i) / ||A_i|| <= epsilon. Two-set Dykstra also waits for
// its iterates to settle (see DykstraTwoSet). Iterations are
// counted the way the iterates are indexed, starting from x^(1) = x, so an
// input that is already feasible reports one iteration.
//
// The component-averaged solvers run every block of the constraint partition
// as an independent problem with its own stopping test. Variables that no
// constraint touches are copied through unchanged.

#ifndef CADPROJ_PROJECTION_H_
#define CADPROJ_PROJECTION_H_

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cadproj/constraint_system.h"
#include "cadproj/partition.h"

namespace cadproj {

enum class Algorithm {
  kTwoSet,
  kSimultaneous,
  kCadRaw,
  kCadScaled,
};

// CLI spellings: "two-set", "simul", "cad-raw", "cad".
std::string_view AlgorithmName(Algorithm algorithm);
// Throws std::invalid_argument on an unknown name.
Algorithm ParseAlgorithm(std::string_view name);

// What an observer sees after each completed iteration of a component.
// `corrections` holds the Dykstra memory p_i restricted to the entries
// (rows[e], cols[e]) of the constraint pattern, in the solver's working
// coordinates; by construction nothing outside N_i is stored.
struct IterationSnapshot {
  int component = 0;
  int iteration = 0;
  // ||x - x^(k)||_2 over the component's variables, in original coordinates.
  double distance = 0.0;
  std::span<const int> rows;
  std::span<const int> cols;
  std::span<const double> corrections;
};

struct SolverConfig {
  double epsilon = 1e-6;
  int max_iterations = 100000;
  Algorithm algorithm = Algorithm::kCadScaled;
  // Worker threads for independent components; output does not depend on it.
  int threads = 1;
  // Called from worker threads when threads > 1.
  std::function<void(const IterationSnapshot&)> observer;
  // Test hook: added to every l_j inside the sqrt(l) change of variables of
  // kCadScaled. Anything but 0 deliberately breaks the solver.
  int l_offset_for_testing = 0;

  // Throws std::invalid_argument unless epsilon > 0 and max_iterations >= 1.
  void Validate() const;
};

struct ProjectionResult {
  std::vector<double> point;
  // input - point.
  std::vector<double> dual;
  // Per component; a single entry for the global solvers.
  std::vector<int> iterations;
  std::vector<char> converged;
  std::vector<double> component_violation;
  // Normalized max violation of the returned point over all constraints.
  double violation = 0.0;
  // Number of iterations where ||x - x^(k)|| shrank. The distance has been
  // observed to grow monotonically but this is not a theorem, so it is only
  // counted.
  int distance_decreases = 0;

  int max_iterations() const;
  bool all_converged() const;
};

using Projector = std::function<std::vector<double>(std::span<const double>)>;
using ViolationFunction = std::function<double(std::span<const double>)>;

// P_{C_i}(x) = x + min{0, (b_i - A_i x) / ||A_i||^2} A_i.
// Throws std::invalid_argument for a zero-norm row.
std::vector<double> ProjectHalfspace(std::span<const double> x,
                                     SparseRowView row, double rhs);

// Two-set Dykstra over arbitrary projections. Stops once
// `violation(x^(k)) <= epsilon` and the last iteration changed none of x, p, q
// by more than epsilon (inf-norm). When no violation function is given it is
// max(||x - P1 x||_inf, ||x - P2 x||_inf).
ProjectionResult DykstraTwoSet(std::span<const double> x,
                               const Projector& first, const Projector& second,
                               const SolverConfig& config,
                               const ViolationFunction& violation = {});

// Two-set Dykstra on a system with at most two constraints (a single
// constraint is paired with R^n).
ProjectionResult DykstraTwoSet(std::span<const double> x,
                               const SparseConstraintSystem& system,
                               const SolverConfig& config);

// Simultaneous Dykstra: every constraint contributes 1/m of the update.
ProjectionResult DykstraSimultaneous(std::span<const double> x,
                                     const SparseConstraintSystem& system,
                                     const SolverConfig& config);

// Component-averaged Dykstra without rescaling. Converges to the l-weighted
// projection argmin_{y in C} sum_j l_j (y_j - x_j)^2.
ProjectionResult CadRaw(std::span<const double> x,
                        const SparseConstraintSystem& system,
                        const ConstraintPartition& partition,
                        const SolverConfig& config);

// Component-averaged Dykstra in the variables x_j / sqrt(l_j), which converges
// to the orthogonal projection P_C(x).
ProjectionResult CadScaled(std::span<const double> x,
                           const SparseConstraintSystem& system,
                           const ConstraintPartition& partition,
                           const SolverConfig& config);

// Dispatches on config.algorithm.
ProjectionResult Project(std::span<const double> x,
                         const SparseConstraintSystem& system,
                         const ConstraintPartition& partition,
                         const SolverConfig& config);
ProjectionResult Project(std::span<const double> x,
                         const SparseConstraintSystem& system,
                         const SolverConfig& config);

// A projector that runs CadScaled and throws std::runtime_error when any
// component fails to converge. The system is copied into the closure.
Projector MakeCadProjector(const SparseConstraintSystem& system,
                           double epsilon, int max_iterations = 100000);

}  // namespace cadproj

#endif  // CADPROJ_PROJECTION_H_
