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

// Brute-force ground truth for small instances. Everything here is dense and
// exponential in m; it exists to check the iterative solvers, not to be fast.

#ifndef CADPROJ_ORACLE_H_
#define CADPROJ_ORACLE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cadproj/constraint_system.h"

namespace cadproj {

inline constexpr int kOracleMaxVariables = 12;
inline constexpr int kOracleMaxConstraints = 12;

struct OracleSolution {
  std::vector<double> point;
  std::vector<int> active_set;
  // One multiplier per active constraint, for the rows as stored.
  std::vector<double> multipliers;
  std::vector<double> weights;
  double objective = 0.0;
};

// argmin_{y in C} sum_j w_j (y_j - x_j)^2 by enumerating active sets. Each
// subset S with linearly independent rows gives the equality-constrained KKT
// point; the feasible one with multipliers >= -1e-9 and least objective wins,
// ties going to the earliest subset. Throws std::invalid_argument when the
// instance is too large or the weights are not positive, and
// std::runtime_error when no candidate passes (an infeasible system).
OracleSolution ProjectBruteForce(std::span<const double> x,
                                 const SparseConstraintSystem& system,
                                 std::span<const double> weights);

// Orthogonal projection (all weights 1).
OracleSolution ProjectBruteForce(std::span<const double> x,
                                 const SparseConstraintSystem& system);

struct KktResiduals {
  double stationarity = 0.0;     // ||2W(y - x) + sum_i lambda_i A_i||_inf
  double primal = 0.0;           // max(0, max_i A_i y - b_i)
  double dual = 0.0;             // max(0, -min lambda)
  double complementarity = 0.0;  // max over active |A_i y - b_i|

  double Worst() const;
};

KktResiduals CheckKkt(const OracleSolution& solution,
                      std::span<const double> x,
                      const SparseConstraintSystem& system);

// max_i (A_i x - b_i) on the rows as stored.
double Feasibility(std::span<const double> x,
                   const SparseConstraintSystem& system);

// Random walk inside C: each step draws a uniform direction on the sphere,
// finds the feasible chord through the current point, and jumps to a uniform
// point on it. Directions with an unbounded chord are redrawn up to 100 times
// before std::runtime_error. The start must be feasible. With box_radius > 0
// the walk is confined to C intersected with the box |z_j - start_j| <= radius,
// which keeps every chord bounded on unbounded polyhedra.
std::vector<double> HitAndRun(const SparseConstraintSystem& system,
                              std::span<const double> start, int steps,
                              std::uint64_t seed, double box_radius = 0.0);

struct LpVertexSolution {
  std::vector<double> point;
  double value = 0.0;
  std::vector<int> basis;
};

// max c^T x over C by enumerating all n-subsets of rows. A vertex is accepted
// as optimal only with a dual certificate c = A_B^T lambda, lambda >= 0, so an
// empty result means the LP is unbounded, infeasible or degenerate at its
// optimum. Limited to n <= 8.
std::optional<LpVertexSolution> SolveLpByVertexEnumeration(
    std::span<const double> c, const SparseConstraintSystem& system);

}  // namespace cadproj

#endif  // CADPROJ_ORACLE_H_
