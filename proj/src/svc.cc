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
#include <stdexcept>
#include <string>

namespace cadproj {

StepBound StepBound::Finite(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("step bound must be finite and >= 0");
  }
  return StepBound(value, true);
}

double StepBound::value() const {
  if (!bounded_) throw std::logic_error("unbounded step has no value");
  return value_;
}

StepBound ConstraintAlpha(std::span<const double> z, std::span<const double> v,
                          SparseRowView row, double rhs, double tolerance) {
  const double norm = std::sqrt(row.SquaredNorm());
  const double slack = rhs - row.Dot(z);
  if (slack < -tolerance * norm) {
    throw std::domain_error("clipping requires a feasible point; violation " +
                            std::to_string(-slack / norm));
  }
  const double rate = row.Dot(v);
  const double alpha = std::max(slack, 0.0) / rate;
  if (rate <= 0.0 || !std::isfinite(alpha)) return StepBound::Unbounded();
  return StepBound::Finite(alpha);
}

ClipReport Clip(std::span<const double> z, std::span<const double> v,
                const SparseConstraintSystem& system,
                const ConstraintPartition& partition, ClipMode mode,
                double tolerance) {
  const int n = system.num_variables();
  if (static_cast<int>(z.size()) != n || static_cast<int>(v.size()) != n) {
    throw std::invalid_argument("clip: dimension mismatch");
  }
  ClipReport report;
  const int m = system.num_constraints();
  report.alphas.reserve(m);
  for (int i = 0; i < m; ++i) {
    report.alphas.push_back(
        ConstraintAlpha(z, v, system.row(i), system.rhs(i), tolerance));
  }

  report.component_alphas.assign(partition.size(), StepBound::Unbounded());
  report.argmins.resize(partition.size());
  for (int p = 0; p < partition.size(); ++p) {
    StepBound best = StepBound::Unbounded();
    for (int i : partition.components[p]) {
      if (report.alphas[i] < best) best = report.alphas[i];
    }
    report.component_alphas[p] = best;
    if (best.bounded()) {
      for (int i : partition.components[p]) {
        if (report.alphas[i] == best) report.argmins[p].push_back(i);
      }
    }
    if (best < report.global_alpha) report.global_alpha = best;
  }

  report.output.assign(z.begin(), z.end());
  const double global_scale = report.global_alpha.Clamp(1.0);
  for (int j = 0; j < n; ++j) {
    const int p = partition.variable_components[j];
    double scale = 1.0;
    if (p != ConstraintPartition::kUnconstrained) {
      scale = mode == ClipMode::kSparse ? report.component_alphas[p].Clamp(1.0)
                                        : global_scale;
    }
    report.output[j] += scale * v[j];
  }
  return report;
}

std::vector<double> ClipChain(std::span<const double> z,
                              std::span<const std::vector<double>> directions,
                              const SparseConstraintSystem& system,
                              const ConstraintPartition& partition,
                              double tolerance) {
  std::vector<double> current(z.begin(), z.end());
  for (size_t k = 0; k < directions.size(); ++k) {
    current = Clip(current, directions[k], system, partition, ClipMode::kSparse,
                   tolerance)
                  .output;
    if (system.num_constraints() > 0 &&
        NormalizedMaxViolation(system, current) > tolerance) {
      throw std::domain_error("clip chain left the feasible set at step " +
                              std::to_string(k));
    }
  }
  return current;
}

}  // namespace cadproj
