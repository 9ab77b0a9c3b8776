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

// Helpers shared by the unit tests: a hand-rolled random system generator
// that does not go through probgen, dense reference computations, and
// Hildreth's dual coordinate ascent as a projection oracle independent of the
// active-set enumeration in oracle.h.

#ifndef CADPROJ_TESTS_TEST_UTIL_H_
#define CADPROJ_TESTS_TEST_UTIL_H_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cadproj/constraint_system.h"

namespace cadproj::testing {

struct RandomSystem {
  SparseConstraintSystem system;
  std::vector<double> interior;  // strictly feasible by construction
};

// Rows with 1..max_support nonzeros at random columns, gaussian values, and
// b = A s + U(0.2, 1) so that s is an interior point.
inline RandomSystem MakeRandomSystem(std::mt19937_64& rng, int n, int m,
                                     int max_support = 3) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> size_dist(1, std::min(n, max_support));
  std::uniform_real_distribution<double> margin(0.2, 1.0);
  std::vector<Triplet> triplets;
  std::vector<int> columns(n);
  for (int j = 0; j < n; ++j) columns[j] = j;
  for (int i = 0; i < m; ++i) {
    std::shuffle(columns.begin(), columns.end(), rng);
    const int size = size_dist(rng);
    for (int k = 0; k < size; ++k) {
      double v = normal(rng);
      if (v == 0.0) v = 1.0;
      triplets.push_back({i, columns[k], v});
    }
  }
  RandomSystem out;
  out.interior.resize(n);
  for (double& s : out.interior) s = normal(rng);
  std::vector<double> rhs(m, 0.0);
  for (const Triplet& t : triplets) rhs[t.row] += t.value * out.interior[t.col];
  for (double& b : rhs) b += margin(rng);
  out.system = SparseConstraintSystem(n, std::move(triplets), std::move(rhs));
  return out;
}

inline std::vector<double> RandomVector(std::mt19937_64& rng, int n,
                                        double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline Eigen::MatrixXd Dense(const SparseConstraintSystem& system) {
  Eigen::MatrixXd a =
      Eigen::MatrixXd::Zero(system.num_constraints(), system.num_variables());
  for (const Triplet& t : system.triplets()) a(t.row, t.col) += t.value;
  return a;
}

inline double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  double out = 0.0;
  for (size_t j = 0; j < a.size(); ++j) out = std::max(out, std::abs(a[j] - b[j]));
  return out;
}

inline double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// argmin_y sum_j w_j (y_j - x_j)^2 s.t. Ay <= b via Hildreth's method: cyclic
// exact maximisation of the dual over one multiplier at a time.
inline std::vector<double> HildrethProjection(
    std::span<const double> x, const SparseConstraintSystem& system,
    std::span<const double> weights = {}, int sweeps = 200000,
    double tolerance = 1e-14) {
  const int n = system.num_variables();
  const int m = system.num_constraints();
  const Eigen::MatrixXd a = Dense(system);
  Eigen::VectorXd inv_w = Eigen::VectorXd::Ones(n);
  if (!weights.empty()) {
    for (int j = 0; j < n; ++j) inv_w[j] = 1.0 / weights[j];
  }
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double change = 0.0;
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXd scaled = inv_w.cwiseProduct(a.row(i).transpose());
      const double curvature = a.row(i).dot(scaled);
      const double residual = a.row(i).dot(y) - system.rhs(i);
      const double next = std::max(0.0, lambda[i] + residual / curvature);
      const double delta = next - lambda[i];
      y -= delta * scaled;
      lambda[i] = next;
      change = std::max(change, std::abs(delta));
    }
    if (change < tolerance) break;
  }
  return std::vector<double>(y.data(), y.data() + n);
}

}  // namespace cadproj::testing

#endif  // CADPROJ_TESTS_TEST_UTIL_H_
