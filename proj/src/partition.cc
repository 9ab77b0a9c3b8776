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

#include "cadproj/partition.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cadproj {

ConstraintPartition ComputePartition(const SparseConstraintSystem& system) {
  const int m = system.num_constraints();
  const int n = system.num_variables();
  constexpr int kNone = std::numeric_limits<int>::max();

  ConstraintPartition partition;
  std::vector<int>& labels = partition.labels;
  labels.resize(m);
  for (int i = 0; i < m; ++i) labels[i] = i;
  std::vector<int> variable_labels(n, kNone);

  // Labels are non-increasing and bounded below by 0, so this terminates.
  bool changed = true;
  while (changed) {
    changed = false;
    ++partition.sweeps;
    for (int j = 0; j < n; ++j) {
      int best = kNone;
      for (int i : system.constraints_of(j)) best = std::min(best, labels[i]);
      variable_labels[j] = best;
    }
    for (int i = 0; i < m; ++i) {
      int best = labels[i];
      for (int j : system.support(i)) best = std::min(best, variable_labels[j]);
      if (best < labels[i]) {
        labels[i] = best;
        changed = true;
      }
    }
  }

  // A label is the minimum index of its component and labels of distinct
  // components differ, so compacting in order of first appearance numbers
  // components by their smallest member.
  std::vector<int> compact(m, -1);
  partition.component_of.resize(m);
  for (int i = 0; i < m; ++i) {
    if (compact[labels[i]] < 0) {
      compact[labels[i]] = static_cast<int>(partition.components.size());
      partition.components.emplace_back();
    }
    partition.component_of[i] = compact[labels[i]];
    partition.components[compact[labels[i]]].push_back(i);
  }

  partition.variable_components.assign(n, ConstraintPartition::kUnconstrained);
  partition.component_variables.resize(partition.components.size());
  for (int j = 0; j < n; ++j) {
    const auto rows = system.constraints_of(j);
    if (rows.empty()) continue;
    const int id = partition.component_of[rows.front()];
    partition.variable_components[j] = id;
    partition.component_variables[id].push_back(j);
  }
  return partition;
}

std::vector<double> BatchedSystem::Slice(std::span<const double> x,
                                         int block) const {
  const int begin = variable_offsets.at(block);
  const int end = variable_offsets.at(block + 1);
  return {x.begin() + begin, x.begin() + end};
}

std::vector<double> BatchedSystem::Join(
    std::span<const std::vector<double>> block_vectors) const {
  if (static_cast<int>(block_vectors.size()) != num_blocks()) {
    throw std::invalid_argument("block count mismatch in Join");
  }
  std::vector<double> out;
  out.reserve(variable_offsets.back());
  for (int k = 0; k < num_blocks(); ++k) {
    if (static_cast<int>(block_vectors[k].size()) !=
        systems[k].num_variables()) {
      throw std::invalid_argument("block size mismatch in Join");
    }
    out.insert(out.end(), block_vectors[k].begin(), block_vectors[k].end());
  }
  return out;
}

BatchedSystem Concatenate(std::span<const SparseConstraintSystem> systems) {
  if (systems.empty()) {
    throw std::invalid_argument("cannot concatenate an empty list of systems");
  }
  BatchedSystem batch;
  batch.systems.assign(systems.begin(), systems.end());
  batch.variable_offsets.push_back(0);
  batch.constraint_offsets.push_back(0);
  std::vector<Triplet> triplets;
  std::vector<double> rhs;
  for (const SparseConstraintSystem& s : systems) {
    const int var_offset = batch.variable_offsets.back();
    const int row_offset = batch.constraint_offsets.back();
    for (Triplet t : s.triplets()) {
      t.row += row_offset;
      t.col += var_offset;
      triplets.push_back(t);
    }
    rhs.insert(rhs.end(), s.rhs().begin(), s.rhs().end());
    batch.variable_offsets.push_back(var_offset + s.num_variables());
    batch.constraint_offsets.push_back(row_offset + s.num_constraints());
  }
  batch.combined = SparseConstraintSystem(batch.variable_offsets.back(),
                                          std::move(triplets), std::move(rhs));
  return batch;
}

}  // namespace cadproj
