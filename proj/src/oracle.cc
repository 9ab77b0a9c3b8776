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

#include "cadproj/oracle.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "cadproj/svc.h"

namespace cadproj {
namespace {

Eigen::MatrixXd DenseMatrix(const SparseConstraintSystem& system) {
  Eigen::MatrixXd a =
      Eigen::MatrixXd::Zero(system.num_constraints(), system.num_variables());
  for (const Triplet& t : system.triplets()) a(t.row, t.col) = t.value;
  return a;
}

Eigen::VectorXd ToEigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

constexpr double kRankThreshold = 1e-10;
constexpr double kDualTolerance = 1e-9;
constexpr double kPrimalTolerance = 1e-9;

}  // namespace

OracleSolution ProjectBruteForce(std::span<const double> x,
                                 const SparseConstraintSystem& system,
                                 std::span<const double> weights) {
  const int n = system.num_variables();
  const int m = system.num_constraints();
  if (n > kOracleMaxVariables || m > kOracleMaxConstraints) {
    throw std::invalid_argument("oracle limited to n, m <= 12; got n=" +
                                std::to_string(n) + " m=" + std::to_string(m));
  }
  if (static_cast<int>(x.size()) != n || static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("oracle: dimension mismatch");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("oracle weights must be > 0");
  }
  RequireValid(system);

  const Eigen::MatrixXd a = DenseMatrix(system);
  const Eigen::VectorXd b = ToEigen(system.rhs());
  const Eigen::VectorXd x0 = ToEigen(x);
  const Eigen::VectorXd w = ToEigen(weights);
  const Eigen::VectorXd w_inv = w.cwiseInverse();

  OracleSolution best;
  double best_objective = std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<int> subset;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    subset.clear();
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) subset.push_back(i);
    }
    const int k = static_cast<int>(subset.size());
    if (k > n) continue;

    Eigen::VectorXd y = x0;
    Eigen::VectorXd lambda(k);
    if (k > 0) {
      Eigen::MatrixXd a_s(k, n);
      Eigen::VectorXd b_s(k);
      for (int r = 0; r < k; ++r) {
        a_s.row(r) = a.row(subset[r]);
        b_s(r) = b(subset[r]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> rank_check(a_s);
      rank_check.setThreshold(kRankThreshold);
      if (rank_check.rank() < k) continue;
      // Stationarity 2W(y - x) + A_S^T lambda = 0 with A_S y = b_S gives
      // lambda = 2 (A_S W^-1 A_S^T)^-1 (A_S x - b_S).
      const Eigen::MatrixXd gram = a_s * w_inv.asDiagonal() * a_s.transpose();
      lambda = 2.0 * gram.ldlt().solve(a_s * x0 - b_s);
      y = x0 - 0.5 * (w_inv.asDiagonal() * (a_s.transpose() * lambda));
      if ((lambda.array() < -kDualTolerance * (1.0 + lambda.cwiseAbs().maxCoeff()))
              .any()) {
        continue;
      }
    }
    const Eigen::VectorXd residual = a * y - b;
    bool feasible = true;
    for (int i = 0; i < m && feasible; ++i) {
      feasible = residual(i) <= kPrimalTolerance * (1.0 + std::abs(b(i)));
    }
    if (!feasible) continue;
    const double objective = (w.array() * (y - x0).array().square()).sum();
    if (!found || objective < best_objective - 1e-12 * (1.0 + best_objective)) {
      found = true;
      best_objective = objective;
      best.point = ToStd(y);
      best.active_set = subset;
      best.multipliers = ToStd(lambda);
      best.objective = objective;
    }
  }
  if (!found) {
    throw std::runtime_error("oracle found no feasible KKT point; system infeasible?");
  }
  best.weights.assign(weights.begin(), weights.end());
  return best;
}

OracleSolution ProjectBruteForce(std::span<const double> x,
                                 const SparseConstraintSystem& system) {
  const std::vector<double> ones(system.num_variables(), 1.0);
  return ProjectBruteForce(x, system, ones);
}

double KktResiduals::Worst() const {
  return std::max({stationarity, primal, dual, complementarity});
}

KktResiduals CheckKkt(const OracleSolution& solution,
                      std::span<const double> x,
                      const SparseConstraintSystem& system) {
  const int n = system.num_variables();
  KktResiduals out;
  std::vector<double> gradient(n);
  for (int j = 0; j < n; ++j) {
    gradient[j] = 2.0 * solution.weights[j] * (solution.point[j] - x[j]);
  }
  for (size_t k = 0; k < solution.active_set.size(); ++k) {
    const SparseRowView row = system.row(solution.active_set[k]);
    for (int e = 0; e < row.size(); ++e) {
      gradient[row.cols[e]] += solution.multipliers[k] * row.values[e];
    }
    out.complementarity =
        std::max(out.complementarity,
                 std::abs(row.Dot(solution.point) - system.rhs(solution.active_set[k])));
    out.dual = std::max(out.dual, -solution.multipliers[k]);
  }
  for (double g : gradient) out.stationarity = std::max(out.stationarity, std::abs(g));
  out.primal = std::max(0.0, Feasibility(solution.point, system));
  return out;
}

double Feasibility(std::span<const double> x,
                   const SparseConstraintSystem& system) {
  return MaxViolation(system, x);
}

std::vector<double> HitAndRun(const SparseConstraintSystem& system,
                              std::span<const double> start, int steps,
                              std::uint64_t seed, double box_radius) {
  constexpr int kMaxRetries = 100;
  if (!(box_radius >= 0.0)) {
    throw std::invalid_argument("hit-and-run: box radius must be >= 0");
  }
  const int n = system.num_variables();
  if (static_cast<int>(start.size()) != n) {
    throw std::invalid_argument("hit-and-run: dimension mismatch");
  }
  std::vector<double> z(start.begin(), start.end());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> direction(n), reverse(n);
  for (int step = 0; step < steps; ++step) {
    bool moved = false;
    for (int attempt = 0; attempt < kMaxRetries && !moved; ++attempt) {
      double norm_sq = 0.0;
      for (int j = 0; j < n; ++j) {
        direction[j] = normal(rng);
        norm_sq += direction[j] * direction[j];
      }
      const double norm = std::sqrt(norm_sq);
      for (int j = 0; j < n; ++j) {
        direction[j] /= norm;
        reverse[j] = -direction[j];
      }
      StepBound forward = StepBound::Unbounded();
      StepBound backward = StepBound::Unbounded();
      for (int i = 0; i < system.num_constraints(); ++i) {
        const StepBound f =
            ConstraintAlpha(z, direction, system.row(i), system.rhs(i));
        const StepBound r = ConstraintAlpha(z, reverse, system.row(i), system.rhs(i));
        if (f < forward) forward = f;
        if (r < backward) backward = r;
      }
      if (box_radius > 0.0) {
        // |z_j + t u_j - start_j| <= box_radius.
        for (int j = 0; j < n; ++j) {
          if (direction[j] == 0.0) continue;
          const double up = std::max(0.0, start[j] + box_radius - z[j]);
          const double down = std::max(0.0, z[j] - (start[j] - box_radius));
          const double ahead = (direction[j] > 0 ? up : down) / std::abs(direction[j]);
          const double behind = (direction[j] > 0 ? down : up) / std::abs(direction[j]);
          forward = std::min(forward, StepBound::Finite(ahead));
          backward = std::min(backward, StepBound::Finite(behind));
        }
      }
      if (!forward.bounded() || !backward.bounded()) continue;
      std::uniform_real_distribution<double> chord(-backward.value(),
                                                   forward.value());
      const double t = chord(rng);
      for (int j = 0; j < n; ++j) z[j] += t * direction[j];
      moved = true;
    }
    if (!moved) {
      throw std::runtime_error("hit-and-run: no bounded chord after " +
                               std::to_string(kMaxRetries) + " directions");
    }
  }
  return z;
}

std::optional<LpVertexSolution> SolveLpByVertexEnumeration(
    std::span<const double> c, const SparseConstraintSystem& system) {
  const int n = system.num_variables();
  const int m = system.num_constraints();
  if (n > 8) throw std::invalid_argument("vertex enumeration limited to n <= 8");
  if (static_cast<int>(c.size()) != n) {
    throw std::invalid_argument("vertex enumeration: dimension mismatch");
  }
  if (m < n) return std::nullopt;
  const Eigen::MatrixXd a = DenseMatrix(system);
  const Eigen::VectorXd b = ToEigen(system.rhs());
  const Eigen::VectorXd cost = ToEigen(c);

  std::optional<LpVertexSolution> best;
  std::vector<int> basis(n);
  for (int k = 0; k < n; ++k) basis[k] = k;
  Eigen::MatrixXd a_b(n, n);
  Eigen::VectorXd b_b(n);
  while (true) {
    for (int r = 0; r < n; ++r) {
      a_b.row(r) = a.row(basis[r]);
      b_b(r) = b(basis[r]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a_b);
    lu.setThreshold(kRankThreshold);
    if (lu.isInvertible()) {
      const Eigen::VectorXd vertex = lu.solve(b_b);
      const Eigen::VectorXd residual = a * vertex - b;
      bool feasible = true;
      for (int i = 0; i < m && feasible; ++i) {
        feasible = residual(i) <= kPrimalTolerance * (1.0 + std::abs(b(i)));
      }
      if (feasible) {
        const Eigen::VectorXd dual = a_b.transpose().fullPivLu().solve(cost);
        const double value = cost.dot(vertex);
        if ((dual.array() >= -kDualTolerance * (1.0 + dual.cwiseAbs().maxCoeff()))
                .all() &&
            (!best || value > best->value)) {
          best = LpVertexSolution{ToStd(vertex), value, basis};
        }
      }
    }
    // Next n-subset in lexicographic order.
    int k = n - 1;
    while (k >= 0 && basis[k] == m - n + k) --k;
    if (k < 0) break;
    ++basis[k];
    for (int r = k + 1; r < n; ++r) basis[r] = basis[r - 1] + 1;
  }
  return best;
}

}  // namespace cadproj
