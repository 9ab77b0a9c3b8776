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

// Sparse vector clipping: move a feasible point z along a direction v, scaling
// v separately on every independent block of constraints so that the result
// stays feasible.

#ifndef CADPROJ_SVC_H_
#define CADPROJ_SVC_H_

#include <algorithm>
#include <span>
#include <vector>

#include "cadproj/constraint_system.h"
#include "cadproj/partition.h"

namespace cadproj {

// A step length in [0, +inf]. The unbounded value is a state, not a large
// double.
class StepBound {
 public:
  static StepBound Unbounded() { return StepBound(0.0, false); }
  // Throws std::invalid_argument for negative or non-finite values.
  static StepBound Finite(double value);

  bool bounded() const { return bounded_; }
  // Throws std::logic_error when unbounded.
  double value() const;
  // min{cap, alpha}.
  double Clamp(double cap) const { return bounded_ ? std::min(cap, value_) : cap; }

  friend bool operator<(const StepBound& a, const StepBound& b) {
    if (!a.bounded_) return false;
    return !b.bounded_ || a.value_ < b.value_;
  }
  friend bool operator==(const StepBound& a, const StepBound& b) {
    return a.bounded_ == b.bounded_ && (!a.bounded_ || a.value_ == b.value_);
  }
  friend bool operator<=(const StepBound& a, const StepBound& b) {
    return a < b || a == b;
  }

 private:
  StepBound(double value, bool bounded) : value_(value), bounded_(bounded) {}
  double value_;
  bool bounded_;
};

// max{alpha >= 0 : A_i (z + alpha v) <= b_i}. Reads only the coordinates in
// N_i. Throws std::domain_error when A_i z - b_i > tolerance.
StepBound ConstraintAlpha(std::span<const double> z, std::span<const double> v,
                          SparseRowView row, double rhs,
                          double tolerance = 1e-9);

enum class ClipMode { kSparse, kStandard };

struct ClipReport {
  std::vector<StepBound> alphas;            // per constraint
  std::vector<StepBound> component_alphas;  // per partition component
  std::vector<std::vector<int>> argmins;    // constraints attaining each minimum
  StepBound global_alpha = StepBound::Unbounded();
  std::vector<double> output;
};

// Sparse mode: y_j = z_j + min{1, alpha_p} v_j for every variable of block p.
// Standard mode: y = z + min{1, alpha_C} v. Variables outside every block get
// the full direction. `tolerance` bounds how infeasible z may be.
ClipReport Clip(std::span<const double> z, std::span<const double> v,
                const SparseConstraintSystem& system,
                const ConstraintPartition& partition, ClipMode mode,
                double tolerance = 1e-9);

// z^(k+1) = Clip(z^(k), directions[k]) in sparse mode. Throws std::domain_error
// if the start or any intermediate point is infeasible beyond `tolerance`.
std::vector<double> ClipChain(std::span<const double> z,
                              std::span<const std::vector<double>> directions,
                              const SparseConstraintSystem& system,
                              const ConstraintPartition& partition,
                              double tolerance = 1e-9);

}  // namespace cadproj

#endif  // CADPROJ_SVC_H_
