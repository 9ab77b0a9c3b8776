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

#ifndef CADPROJ_SCATTER_H_
#define CADPROJ_SCATTER_H_

#include <span>
#include <vector>

namespace cadproj {

// out[i] = sum of values[k] over all k with indices[k] == i. Values are added
// in ascending input position, so the result is reproducible bit for bit.
// Throws std::out_of_range for an index outside [0, size) and
// std::invalid_argument when the two inputs differ in length.
std::vector<double> Scatter(std::span<const int> indices,
                            std::span<const double> values, int size);

// Accumulating form of Scatter; adds into `out` without clearing it.
void ScatterAdd(std::span<const int> indices, std::span<const double> values,
                std::span<double> out);

}  // namespace cadproj

#endif  // CADPROJ_SCATTER_H_
