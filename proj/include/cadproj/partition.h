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

#ifndef CADPROJ_PARTITION_H_
#define CADPROJ_PARTITION_H_

#include <span>
#include <vector>

#include "cadproj/constraint_system.h"

namespace cadproj {

// The finest partition of the constraints such that no two blocks share a
// variable, i.e. the connected components of the constraint/variable
// bipartite graph.
struct ConstraintPartition {
  static constexpr int kUnconstrained = -1;

  // Propagated label of each constraint: the smallest constraint index in its
  // component.
  std::vector<int> labels;
  // Compact component id of each constraint, numbered by smallest member.
  std::vector<int> component_of;
  // Sorted constraint indices of each component.
  std::vector<std::vector<int>> components;
  // Component id of each variable, or kUnconstrained when l_j = 0.
  std::vector<int> variable_components;
  // Sorted variable indices of each component.
  std::vector<std::vector<int>> component_variables;
  // Number of full propagation sweeps until the labels stopped changing.
  int sweeps = 0;

  int size() const { return static_cast<int>(components.size()); }
};

// Label propagation: constraint labels start at their own index and are
// alternately pushed to variables and pulled back as neighbourhood minima
// until a full sweep changes nothing.
ConstraintPartition ComputePartition(const SparseConstraintSystem& system);

// Block-diagonal concatenation of independent systems.
struct BatchedSystem {
  std::vector<SparseConstraintSystem> systems;
  SparseConstraintSystem combined;
  // Size systems.size() + 1; block k owns [offsets[k], offsets[k + 1]).
  std::vector<int> variable_offsets;
  std::vector<int> constraint_offsets;

  int num_blocks() const { return static_cast<int>(systems.size()); }
  // Restricts a length-n(combined) vector to block k.
  std::vector<double> Slice(std::span<const double> x, int block) const;
  // Inverse of Slice over all blocks.
  std::vector<double> Join(
      std::span<const std::vector<double>> block_vectors) const;
};

// Throws std::invalid_argument on an empty list.
BatchedSystem Concatenate(std::span<const SparseConstraintSystem> systems);

}  // namespace cadproj

#endif  // CADPROJ_PARTITION_H_
