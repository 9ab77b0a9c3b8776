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

#include <stdexcept>
#include <string>

namespace cadproj {

void ScatterAdd(std::span<const int> indices, std::span<const double> values,
                std::span<double> out) {
  if (indices.size() != values.size()) {
    throw std::invalid_argument("scatter: indices and values differ in length");
  }
  const int size = static_cast<int>(out.size());
  for (size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= size) {
      throw std::out_of_range("scatter: index " + std::to_string(indices[k]) +
                              " outside [0, " + std::to_string(size) + ")");
    }
  }
  for (size_t k = 0; k < indices.size(); ++k) out[indices[k]] += values[k];
}

std::vector<double> Scatter(std::span<const int> indices,
                            std::span<const double> values, int size) {
  if (size < 0) throw std::invalid_argument("scatter: negative size");
  std::vector<double> out(size, 0.0);
  ScatterAdd(indices, values, out);
  return out;
}

}  // namespace cadproj
