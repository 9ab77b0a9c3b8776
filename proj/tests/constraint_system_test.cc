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

#include "cadproj/constraint_system.h"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "test_util.h"

namespace cadproj {
namespace {

using Kind = ValidationFinding::Kind;

TEST_CASE("storage is sorted by row then column and drops zeros") {
  const SparseConstraintSystem s(3, {{1, 2, 4.0}, {0, 1, 2.0}, {1, 0, 0.0},
                                     {0, 0, -1.0}, {1, 1, 3.0}},
                                 {1.0, 2.0});
  CHECK(s.num_variables() == 3);
  CHECK(s.num_constraints() == 2);
  CHECK(s.num_nonzeros() == 4);
  CHECK(std::vector<int>(s.entry_rows().begin(), s.entry_rows().end()) ==
        std::vector<int>{0, 0, 1, 1});
  CHECK(std::vector<int>(s.entry_cols().begin(), s.entry_cols().end()) ==
        std::vector<int>{0, 1, 1, 2});
  CHECK(std::vector<int>(s.support(1).begin(), s.support(1).end()) ==
        std::vector<int>{1, 2});
  CHECK(std::vector<int>(s.constraints_of(1).begin(), s.constraints_of(1).end()) ==
        std::vector<int>{0, 1});
  CHECK(s.constraints_of(0).size() == 1);
  CHECK(std::vector<int>(s.constraint_counts().begin(),
                         s.constraint_counts().end()) == std::vector<int>{1, 2, 1});
  CHECK(s.row_norms()[0] == doctest::Approx(std::sqrt(5.0)));
  CHECK(s.row_norms()[1] == doctest::Approx(5.0));
}

TEST_CASE("out-of-range triplets are rejected") {
  CHECK_THROWS_AS(SparseConstraintSystem(2, {{0, 2, 1.0}}, {0.0}), std::out_of_range);
  CHECK_THROWS_AS(SparseConstraintSystem(2, {{1, 0, 1.0}}, {0.0}), std::out_of_range);
  CHECK_THROWS_AS(SparseConstraintSystem(2, {{-1, 0, 1.0}}, {0.0}), std::out_of_range);
}

TEST_CASE("multiply matches a dense product on random systems") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = testing::MakeRandomSystem(rng, 1 + trial % 9, 1 + trial % 7);
    const std::vector<double> x =
        testing::RandomVector(rng, r.system.num_variables(), 3.0);
    const Eigen::VectorXd dense =
        testing::Dense(r.system) *
        Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
    const std::vector<double> sparse = r.system.Multiply(x);
    for (int i = 0; i < r.system.num_constraints(); ++i) {
      CHECK(sparse[i] == doctest::Approx(dense[i]).epsilon(1e-12));
      CHECK(r.system.row(i).Dot(x) == doctest::Approx(dense[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("incidence lists are consistent with the row pattern") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto r = testing::MakeRandomSystem(rng, 2 + trial % 8, 1 + trial % 9);
    const SparseConstraintSystem& s = r.system;
    for (int j = 0; j < s.num_variables(); ++j) {
      CHECK(static_cast<int>(s.constraints_of(j).size()) == s.constraint_counts()[j]);
      for (int i : s.constraints_of(j)) {
        const auto support = s.support(i);
        CHECK(std::find(support.begin(), support.end(), j) != support.end());
      }
    }
    int total = 0;
    for (int l : s.constraint_counts()) total += l;
    CHECK(total == s.num_nonzeros());
  }
}

TEST_CASE("triplets round-trip through construction") {
  std::mt19937_64 rng(13);
  const auto r = testing::MakeRandomSystem(rng, 6, 5);
  const SparseConstraintSystem copy(6, r.system.triplets(),
                                    {r.system.rhs().begin(), r.system.rhs().end()});
  CHECK(copy == r.system);
}

TEST_CASE("validation reports each kind of defect") {
  SUBCASE("empty row") {
    const SparseConstraintSystem s(2, {{0, 0, 1.0}}, {1.0, 1.0});
    const ValidationReport report = Validate(s);
    CHECK(report.Has(Kind::kEmptyRow));
    CHECK_THROWS_AS(RequireValid(s), std::invalid_argument);
  }
  SUBCASE("row whose norm underflows") {
    const SparseConstraintSystem s(1, {{0, 0, 1e-200}}, {1.0});
    CHECK(Validate(s).Has(Kind::kZeroNormRow));
  }
  SUBCASE("duplicate entry") {
    const SparseConstraintSystem s(2, {{0, 1, 1.0}, {0, 1, 2.0}}, {1.0});
    CHECK(Validate(s).Has(Kind::kDuplicateEntry));
  }
  SUBCASE("non-finite value and rhs") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(Validate(SparseConstraintSystem(1, {{0, 0, std::nan("")}}, {1.0}))
              .Has(Kind::kNonFiniteValue));
    CHECK(Validate(SparseConstraintSystem(1, {{0, 0, 1.0}}, {inf}))
              .Has(Kind::kNonFiniteRhs));
  }
  SUBCASE("a clean system validates") {
    const SparseConstraintSystem s(2, {{0, 0, 1.0}, {1, 1, 1.0}}, {1.0, 1.0});
    CHECK(Validate(s).ok());
    CHECK_NOTHROW(RequireValid(s));
  }
}

TEST_CASE("violation measures") {
  const SparseConstraintSystem s(2, {{0, 0, 2.0}, {1, 1, 1.0}}, {2.0, 1.0});
  CHECK(MaxViolation(s, std::vector<double>{3.0, 0.0}) == doctest::Approx(4.0));
  CHECK(NormalizedMaxViolation(s, std::vector<double>{3.0, 0.0}) ==
        doctest::Approx(2.0));
  CHECK(MaxViolation(s, std::vector<double>{0.0, 0.0}) == doctest::Approx(-1.0));
  const SparseConstraintSystem empty(2, {}, {});
  CHECK(MaxViolation(empty, std::vector<double>{1.0, 1.0}) ==
        -std::numeric_limits<double>::infinity());
}

}  // namespace
}  // namespace cadproj
