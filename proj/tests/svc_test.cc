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

#include "cadproj/svc.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "cadproj/oracle.h"
#include "doctest.h"
#include "test_util.h"

namespace cadproj {
namespace {

TEST_CASE("step bounds") {
  CHECK_FALSE(StepBound::Unbounded().bounded());
  CHECK_THROWS_AS(StepBound::Unbounded().value(), std::logic_error);
  CHECK_THROWS_AS(StepBound::Finite(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(StepBound::Finite(INFINITY), std::invalid_argument);
  CHECK(StepBound::Finite(2.0) < StepBound::Unbounded());
  CHECK_FALSE(StepBound::Unbounded() < StepBound::Finite(2.0));
  CHECK(StepBound::Finite(0.5).Clamp(1.0) == 0.5);
  CHECK(StepBound::Unbounded().Clamp(1.0) == 1.0);
}

TEST_CASE("constraint alpha") {
  const SparseConstraintSystem s(2, {{0, 0, 1.0}}, {1.0});
  const std::vector<double> origin = {0, 0};
  CHECK(ConstraintAlpha(origin, std::vector<double>{1, 0}, s.row(0), 1.0) ==
        StepBound::Finite(1.0));
  CHECK_FALSE(ConstraintAlpha(origin, std::vector<double>{-1, 3}, s.row(0), 1.0)
                  .bounded());
  CHECK_FALSE(ConstraintAlpha(origin, std::vector<double>{0, 3}, s.row(0), 1.0)
                  .bounded());
  CHECK(ConstraintAlpha(std::vector<double>{1, 0}, std::vector<double>{2, 0},
                        s.row(0), 1.0) == StepBound::Finite(0.0));
  CHECK_THROWS_AS(ConstraintAlpha(std::vector<double>{2, 0},
                                  std::vector<double>{1, 0}, s.row(0), 1.0),
                  std::domain_error);
}

TEST_CASE("two-component witness") {
  const SparseConstraintSystem s(2, {{0, 0, 1.0}, {1, 1, 1.0}}, {1.0, 1.0});
  const ConstraintPartition p = ComputePartition(s);
  const std::vector<double> z = {0, 0}, v = {2, 0.5};
  const ClipReport sparse = Clip(z, v, s, p, ClipMode::kSparse);
  CHECK(sparse.output == std::vector<double>{1.0, 0.5});
  CHECK(sparse.component_alphas[0] == StepBound::Finite(0.5));
  CHECK(sparse.component_alphas[1] == StepBound::Finite(2.0));
  CHECK(sparse.global_alpha == StepBound::Finite(0.5));
  const ClipReport standard = Clip(z, v, s, p, ClipMode::kStandard);
  CHECK(standard.output == std::vector<double>{1.0, 0.25});
  // Standard mode scales v by one factor t, so (1, 0.5) needs t = 0.5 and
  // t = 1 at once.
  for (double t = 0.0; t <= 1.0; t += 1.0 / 64) {
    CHECK_FALSE((z[0] + t * v[0] == 1.0 && z[1] + t * v[1] == 0.5));
  }
}

TEST_CASE("zero direction, free variables and argmins") {
  const SparseConstraintSystem s(3, {{0, 0, 1.0}, {1, 0, 1.0}}, {1.0, 1.0});
  const ConstraintPartition p = ComputePartition(s);
  const std::vector<double> z = {0.5, 3, -1};
  CHECK(Clip(z, std::vector<double>{0, 0, 0}, s, p, ClipMode::kSparse).output == z);
  const ClipReport r = Clip(z, std::vector<double>{1, 5, 7}, s, p, ClipMode::kSparse);
  CHECK(r.output == std::vector<double>{1.0, 8, 6});
  // Both identical rows attain the minimum.
  CHECK(r.argmins[0] == std::vector<int>{0, 1});
  CHECK_THROWS_AS(Clip(std::vector<double>{2, 0, 0}, std::vector<double>{1, 0, 0},
                       s, p, ClipMode::kSparse),
                  std::domain_error);
}

TEST_CASE("chains") {
  const SparseConstraintSystem s(2, {{0, 0, 1.0}, {1, 1, 1.0}}, {1.0, 1.0});
  const ConstraintPartition p = ComputePartition(s);
  const std::vector<double> z = {0, 0};
  const std::vector<std::vector<double>> zeros(3, std::vector<double>{0, 0});
  CHECK(ClipChain(z, zeros, s, p) == z);
  const std::vector<std::vector<double>> one = {{2, 0.5}};
  CHECK(ClipChain(z, one, s, p) == Clip(z, one[0], s, p, ClipMode::kSparse).output);
}

// Properties on random systems with hit-and-run start points.
TEST_CASE("random clips stay feasible and sparse mode dominates") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 10;
    const int m = 1 + trial % 8;
    const auto r = testing::MakeRandomSystem(rng, n, m, 3);
    const ConstraintPartition p = ComputePartition(r.system);
    const std::vector<double> z = HitAndRun(r.system, r.interior, 10, trial, 4.0);
    std::vector<double> v(n);
    for (double& x : v) x = normal(rng);
    double b_max = 0.0;
    for (double b : r.system.rhs()) b_max = std::max(b_max, std::abs(b));
    const double tolerance = 1e-9 * (1 + b_max);

    const ClipReport sparse = Clip(z, v, r.system, p, ClipMode::kSparse);
    const ClipReport standard = Clip(z, v, r.system, p, ClipMode::kStandard);
    CHECK(Feasibility(sparse.output, r.system) <= tolerance);
    CHECK(Feasibility(standard.output, r.system) <= tolerance);
    for (int c = 0; c < p.size(); ++c) {
      CHECK(sparse.global_alpha <= sparse.component_alphas[c]);
    }
    for (int j = 0; j < n; ++j) {
      CHECK(std::abs(sparse.output[j] - z[j]) >=
            std::abs(standard.output[j] - z[j]) * (1 - 1e-12));
    }
    if (p.size() == 1) CHECK(sparse.output == standard.output);

    std::vector<std::vector<double>> directions(3, std::vector<double>(n));
    for (auto& d : directions) {
      for (double& x : d) x = normal(rng);
    }
    CHECK(Feasibility(ClipChain(z, directions, r.system, p), r.system) <= tolerance);
  }
}

// Away from ties in the minimum the clipped output is smooth in z; central
// differences of a fixed linear functional must agree with the one-sided
// closed form y = z + alpha_p(z) v.
TEST_CASE("finite differences away from ties") {
  std::mt19937_64 rng(62);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 20; ++trial) {
    const auto r = testing::MakeRandomSystem(rng, 4, 5, 2);
    const ConstraintPartition p = ComputePartition(r.system);
    const std::vector<double> z = HitAndRun(r.system, r.interior, 5, trial, 2.0);
    const std::vector<double> v = testing::RandomVector(rng, 4, 20.0);
    const ClipReport base = Clip(z, v, r.system, p, ClipMode::kSparse);
    bool clean = true;
    for (int c = 0; c < p.size(); ++c) {
      const StepBound& a = base.component_alphas[c];
      clean &= base.argmins[c].size() <= 1 && (!a.bounded() || std::abs(a.value() - 1) > 1e-3);
    }
    if (!clean) continue;
    ++checked;
    const double h = 1e-7;
    for (int j = 0; j < 4; ++j) {
      std::vector<double> up(z), down(z);
      up[j] += h;
      down[j] -= h;
      const std::vector<double> yu = Clip(up, v, r.system, p, ClipMode::kSparse).output;
      const std::vector<double> yd = Clip(down, v, r.system, p, ClipMode::kSparse).output;
      for (int k = 0; k < 4; ++k) {
        // Analytic derivative: e_j plus v times d alpha / d z_j.
        double expected = (j == k) ? 1.0 : 0.0;
        const int c = p.variable_components[k];
        if (c != ConstraintPartition::kUnconstrained) {
          const StepBound& a = base.component_alphas[c];
          if (a.bounded() && a.value() < 1.0) {
            const int i = base.argmins[c][0];
            const SparseRowView row = r.system.row(i);
            double rate = row.Dot(v), coef = 0.0;
            for (int e = 0; e < row.size(); ++e) {
              if (row.cols[e] == j) coef = row.values[e];
            }
            expected += v[k] * (-coef / rate);
          }
        }
        CHECK((yu[k] - yd[k]) / (2 * h) == doctest::Approx(expected).epsilon(1e-5).scale(1));
      }
    }
  }
  CHECK(checked > 5);
}

}  // namespace
}  // namespace cadproj
