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

#include "cadproj/scatter.h"

#include <random>
#include <stdexcept>

#include "doctest.h"

namespace cadproj {
namespace {

TEST_CASE("segmented sums") {
  CHECK(Scatter(std::vector<int>{0, 0, 1}, std::vector<double>{1, 2, 3}, 2) ==
        std::vector<double>{3, 3});
  CHECK(Scatter({}, {}, 3) == std::vector<double>{0, 0, 0});
  CHECK(Scatter(std::vector<int>{2}, std::vector<double>{5}, 4) ==
        std::vector<double>{0, 0, 5, 0});
}

TEST_CASE("bad inputs") {
  CHECK_THROWS_AS(Scatter(std::vector<int>{2}, std::vector<double>{1}, 2),
                  std::out_of_range);
  CHECK_THROWS_AS(Scatter(std::vector<int>{-1}, std::vector<double>{1}, 2),
                  std::out_of_range);
  CHECK_THROWS_AS(Scatter(std::vector<int>{0, 1}, std::vector<double>{1}, 2),
                  std::invalid_argument);
}

TEST_CASE("matches a naive loop bit for bit") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> value(-1e3, 1e3);
  for (int trial = 0; trial < 100; ++trial) {
    const int size = 1 + trial % 13;
    std::uniform_int_distribution<int> index(0, size - 1);
    std::vector<int> indices(trial * 3);
    std::vector<double> values(indices.size());
    for (size_t k = 0; k < indices.size(); ++k) {
      indices[k] = index(rng);
      values[k] = value(rng);
    }
    std::vector<double> naive(size, 0.0);
    for (size_t k = 0; k < indices.size(); ++k) naive[indices[k]] += values[k];
    CHECK(Scatter(indices, values, size) == naive);

    std::vector<double> accumulated(size, 1.0);
    ScatterAdd(indices, values, accumulated);
    for (int i = 0; i < size; ++i) {
      double expected = 1.0;
      for (size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] == i) expected += values[k];
      }
      CHECK(accumulated[i] == expected);
    }
  }
}

}  // namespace
}  // namespace cadproj
