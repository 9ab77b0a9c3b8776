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

#include "cadproj/projection.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cadproj/parallel.h"
#include "cadproj/scatter.h"

namespace cadproj {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void CheckDimension(std::span<const double> x,
                    const SparseConstraintSystem& system) {
  if (static_cast<int>(x.size()) != system.num_variables()) {
    throw std::invalid_argument(
        "point has " + std::to_string(x.size()) + " entries, system has " +
        std::to_string(system.num_variables()) + " variables");
  }
}

// Tracks ||x - x^(k)|| and counts iterations where it shrinks.
class DistanceMonitor {
 public:
  double Update(double distance) {
    if (distance < previous_ * (1.0 - 1e-12)) ++decreases_;
    previous_ = distance;
    return distance;
  }
  int decreases() const { return decreases_; }

 private:
  double previous_ = 0.0;
  int decreases_ = 0;
};

double Distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t j = 0; j < a.size(); ++j) sum += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(sum);
}

void FinishResult(std::span<const double> x,
                  const SparseConstraintSystem* system,
                  ProjectionResult& result) {
  result.dual.resize(x.size());
  for (size_t j = 0; j < x.size(); ++j) result.dual[j] = x[j] - result.point[j];
  if (system != nullptr) {
    result.violation = system->num_constraints() > 0
                           ? NormalizedMaxViolation(*system, result.point)
                           : kNegInf;
  } else {
    result.violation = result.component_violation.empty()
                           ? kNegInf
                           : *std::max_element(result.component_violation.begin(),
                                               result.component_violation.end());
  }
}

// One block of the partition, reindexed locally. Entries keep the global
// row-major order, so local rows are contiguous.
struct Block {
  std::vector<int> variables;
  std::vector<int> row_ptr{0};
  std::vector<int> entry_rows;  // global
  std::vector<int> entry_cols;  // global
  std::vector<int> local_cols;
  std::vector<int> local_rows;
  std::vector<double> values;           // working (scaled, normalized) A_V
  std::vector<double> rhs;              // working b
  std::vector<double> violation_scale;  // working residual -> A_i x - b_i / ||A_i||
  std::vector<double> counts;           // l_j
  std::vector<double> scale;            // x_j = scale_j * working_j
};

Block BuildBlock(const SparseConstraintSystem& system,
                 const ConstraintPartition& partition, int component,
                 bool rescale, int l_offset) {
  Block block;
  block.variables = partition.component_variables[component];
  std::vector<int> local_of(system.num_variables(), -1);
  for (size_t v = 0; v < block.variables.size(); ++v) {
    local_of[block.variables[v]] = static_cast<int>(v);
  }
  const auto counts = system.constraint_counts();
  block.counts.resize(block.variables.size());
  block.scale.resize(block.variables.size(), 1.0);
  for (size_t v = 0; v < block.variables.size(); ++v) {
    block.counts[v] = counts[block.variables[v]];
    if (rescale) {
      block.scale[v] = std::sqrt(std::max(1, counts[block.variables[v]] + l_offset));
    }
  }
  const std::vector<int>& rows = partition.components[component];
  for (size_t r = 0; r < rows.size(); ++r) {
    const SparseRowView row = system.row(rows[r]);
    double norm_sq = 0.0;
    for (int k = 0; k < row.size(); ++k) {
      const int local = local_of[row.cols[k]];
      // A_V <- A_V * sqrt(l)[A_col], then divided by the new row norm below.
      const double value = row.values[k] * block.scale[local];
      norm_sq += value * value;
      block.entry_rows.push_back(rows[r]);
      block.entry_cols.push_back(row.cols[k]);
      block.local_rows.push_back(static_cast<int>(r));
      block.local_cols.push_back(local);
      block.values.push_back(value);
    }
    const double norm = std::sqrt(norm_sq);
    for (int e = block.row_ptr.back(); e < block.row_ptr.back() + row.size();
         ++e) {
      block.values[e] /= norm;
    }
    block.rhs.push_back(system.rhs(rows[r]) / norm);
    block.violation_scale.push_back(norm / system.row_norms()[rows[r]]);
    block.row_ptr.push_back(block.row_ptr.back() + row.size());
  }
  return block;
}

struct BlockOutcome {
  int iterations = 0;
  bool converged = false;
  double violation = kNegInf;
  int distance_decreases = 0;
};

// The component-averaged iteration on one block:
//   z = x[A_col] + p
//   s = min{b - scatter(A_row, A_V z), 0}
//   p = -A_V s[A_row]
//   x = scatter(A_col, z - p) / l
BlockOutcome RunBlock(const Block& block, int component, std::span<double> x,
                      const SolverConfig& config) {
  const int nv = static_cast<int>(block.variables.size());
  const int nr = static_cast<int>(block.rhs.size());
  const int nnz = static_cast<int>(block.values.size());

  std::vector<double> work(nv), start(nv);
  for (int v = 0; v < nv; ++v) {
    work[v] = x[block.variables[v]] / block.scale[v];
    start[v] = work[v];
  }
  std::vector<double> p(nnz, 0.0), p_next(nnz), z(nnz), delta(nnz);
  std::vector<double> slack(nr);

  auto violation = [&] {
    double worst = kNegInf;
    for (int r = 0; r < nr; ++r) {
      double ax = 0.0;
      for (int e = block.row_ptr[r]; e < block.row_ptr[r + 1]; ++e) {
        ax += block.values[e] * work[block.local_cols[e]];
      }
      worst = std::max(worst, (ax - block.rhs[r]) * block.violation_scale[r]);
    }
    return worst;
  };
  auto distance = [&] {
    double sum = 0.0;
    for (int v = 0; v < nv; ++v) {
      const double d = block.scale[v] * (work[v] - start[v]);
      sum += d * d;
    }
    return std::sqrt(sum);
  };

  BlockOutcome outcome;
  DistanceMonitor monitor;
  int k = 1;
  while (true) {
    outcome.violation = violation();
    if (outcome.violation <= config.epsilon) {
      outcome.converged = true;
      break;
    }
    if (k >= config.max_iterations) break;

    for (int e = 0; e < nnz; ++e) z[e] = work[block.local_cols[e]] + p[e];
    for (int r = 0; r < nr; ++r) {
      double az = 0.0;
      for (int e = block.row_ptr[r]; e < block.row_ptr[r + 1]; ++e) {
        az += block.values[e] * z[e];
      }
      slack[r] = std::min(block.rhs[r] - az, 0.0);
    }
    for (int e = 0; e < nnz; ++e) {
      p_next[e] = -block.values[e] * slack[block.local_rows[e]];
      delta[e] = z[e] - p_next[e];
    }
    std::fill(work.begin(), work.end(), 0.0);
    ScatterAdd(block.local_cols, delta, work);
    for (int v = 0; v < nv; ++v) work[v] /= block.counts[v];
    p.swap(p_next);
    ++k;

    const double dist = monitor.Update(distance());
    if (config.observer) {
      config.observer({component, k, dist, block.entry_rows, block.entry_cols,
                       p});
    }
  }
  outcome.iterations = k;
  outcome.distance_decreases = monitor.decreases();
  for (int v = 0; v < nv; ++v) {
    x[block.variables[v]] = work[v] * block.scale[v];
  }
  return outcome;
}

ProjectionResult RunComponentAveraged(std::span<const double> x,
                                      const SparseConstraintSystem& system,
                                      const ConstraintPartition& partition,
                                      const SolverConfig& config,
                                      bool rescale) {
  config.Validate();
  CheckDimension(x, system);
  RequireValid(system);
  if (static_cast<int>(partition.component_of.size()) !=
          system.num_constraints() ||
      static_cast<int>(partition.variable_components.size()) !=
          system.num_variables()) {
    throw std::invalid_argument("partition does not match system");
  }

  const int components = partition.size();
  ProjectionResult result;
  result.point.assign(x.begin(), x.end());
  result.iterations.assign(components, 0);
  result.converged.assign(components, 0);
  result.component_violation.assign(components, kNegInf);
  std::vector<int> decreases(components, 0);

  // Blocks touch disjoint variables, so they can write into the shared point.
  ParallelFor(components, config.threads, [&](int c) {
    const Block block = BuildBlock(system, partition, c, rescale,
                                   rescale ? config.l_offset_for_testing : 0);
    const BlockOutcome outcome = RunBlock(block, c, result.point, config);
    result.iterations[c] = outcome.iterations;
    result.converged[c] = outcome.converged;
    result.component_violation[c] = outcome.violation;
    decreases[c] = outcome.distance_decreases;
  });
  for (int d : decreases) result.distance_decreases += d;
  FinishResult(x, nullptr, result);
  return result;
}

}  // namespace

std::string_view AlgorithmName(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kTwoSet:
      return "two-set";
    case Algorithm::kSimultaneous:
      return "simul";
    case Algorithm::kCadRaw:
      return "cad-raw";
    case Algorithm::kCadScaled:
      return "cad";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kTwoSet, Algorithm::kSimultaneous,
                      Algorithm::kCadRaw, Algorithm::kCadScaled}) {
    if (AlgorithmName(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

void SolverConfig::Validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be >= 1");
  }
}

int ProjectionResult::max_iterations() const {
  return iterations.empty() ? 0
                            : *std::max_element(iterations.begin(),
                                                iterations.end());
}

bool ProjectionResult::all_converged() const {
  return std::all_of(converged.begin(), converged.end(),
                     [](char c) { return c != 0; });
}

std::vector<double> ProjectHalfspace(std::span<const double> x,
                                     SparseRowView row, double rhs) {
  const double norm_sq = row.SquaredNorm();
  if (!(norm_sq > 0.0)) {
    throw std::invalid_argument("halfspace projection onto a zero-norm row");
  }
  std::vector<double> out(x.begin(), x.end());
  const double step = std::min(0.0, (rhs - row.Dot(x)) / norm_sq);
  if (step < 0.0) {
    for (int k = 0; k < row.size(); ++k) out[row.cols[k]] += step * row.values[k];
  }
  return out;
}

ProjectionResult DykstraTwoSet(std::span<const double> x,
                               const Projector& first, const Projector& second,
                               const SolverConfig& config,
                               const ViolationFunction& violation) {
  config.Validate();
  const size_t n = x.size();
  auto measure = [&](std::span<const double> point) {
    if (violation) return violation(point);
    double worst = 0.0;
    for (const Projector* proj : {&first, &second}) {
      const std::vector<double> image = (*proj)(point);
      for (size_t j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(point[j] - image[j]));
      }
    }
    return worst;
  };

  std::vector<double> current(x.begin(), x.end());
  std::vector<double> p(n, 0.0), q(n, 0.0), shifted(n);
  DistanceMonitor monitor;
  ProjectionResult result;
  double viol = 0.0;
  bool converged = false;
  int k = 1;
  // Sequential iterates can be feasible long before they reach the
  // projection (after one sweep they are the alternating-projection point),
  // so the iterate and both corrections must also have stopped moving.
  double step = 0.0;
  while (true) {
    viol = measure(current);
    if (viol <= config.epsilon && step <= config.epsilon) {
      converged = true;
      break;
    }
    if (k >= config.max_iterations) break;
    for (size_t j = 0; j < n; ++j) shifted[j] = current[j] + p[j];
    const std::vector<double> y = first(shifted);
    step = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double p_next = shifted[j] - y[j];
      step = std::max(step, std::abs(p_next - p[j]));
      p[j] = p_next;
      shifted[j] = y[j] + q[j];
    }
    std::vector<double> next = second(shifted);
    for (size_t j = 0; j < n; ++j) {
      const double q_next = shifted[j] - next[j];
      step = std::max({step, std::abs(q_next - q[j]),
                       std::abs(next[j] - current[j])});
      q[j] = q_next;
    }
    current.swap(next);
    ++k;
    const double dist = monitor.Update(Distance(x, current));
    if (config.observer) config.observer({0, k, dist, {}, {}, {}});
  }
  result.point = std::move(current);
  result.iterations = {k};
  result.converged = {static_cast<char>(converged)};
  result.component_violation = {viol};
  result.distance_decreases = monitor.decreases();
  FinishResult(x, nullptr, result);
  return result;
}

ProjectionResult DykstraTwoSet(std::span<const double> x,
                               const SparseConstraintSystem& system,
                               const SolverConfig& config) {
  CheckDimension(x, system);
  RequireValid(system);
  const int m = system.num_constraints();
  if (m > 2) {
    throw std::invalid_argument("two-set Dykstra needs at most 2 constraints, got " +
                                std::to_string(m));
  }
  auto halfspace = [&system](int i) -> Projector {
    return [&system, i](std::span<const double> v) {
      return ProjectHalfspace(v, system.row(i), system.rhs(i));
    };
  };
  const Projector identity = [](std::span<const double> v) {
    return std::vector<double>(v.begin(), v.end());
  };
  const Projector first = m >= 1 ? halfspace(0) : identity;
  const Projector second = m == 2 ? halfspace(1) : identity;
  const ViolationFunction violation = [&system](std::span<const double> v) {
    return system.num_constraints() > 0 ? NormalizedMaxViolation(system, v)
                                        : kNegInf;
  };
  ProjectionResult result = DykstraTwoSet(x, first, second, config, violation);
  FinishResult(x, &system, result);
  return result;
}

ProjectionResult DykstraSimultaneous(std::span<const double> x,
                                     const SparseConstraintSystem& system,
                                     const SolverConfig& config) {
  config.Validate();
  CheckDimension(x, system);
  RequireValid(system);
  const int m = system.num_constraints();
  const int nnz = system.num_nonzeros();
  const auto rows = system.entry_rows();
  const auto cols = system.entry_cols();

  std::vector<double> values(system.entry_values().begin(),
                             system.entry_values().end());
  std::vector<double> rhs(m);
  for (int e = 0; e < nnz; ++e) values[e] /= system.row_norms()[rows[e]];
  for (int i = 0; i < m; ++i) rhs[i] = system.rhs(i) / system.row_norms()[i];

  std::vector<double> current(x.begin(), x.end());
  std::vector<double> p(nnz, 0.0), p_next(nnz), z(nnz), delta(nnz), slack(m);
  std::vector<double> update(x.size());
  DistanceMonitor monitor;
  ProjectionResult result;
  double viol = kNegInf;
  bool converged = false;
  int k = 1;
  while (true) {
    viol = m > 0 ? NormalizedMaxViolation(system, current) : kNegInf;
    if (viol <= config.epsilon) {
      converged = true;
      break;
    }
    if (k >= config.max_iterations) break;
    std::fill(slack.begin(), slack.end(), 0.0);
    for (int e = 0; e < nnz; ++e) {
      z[e] = current[cols[e]] + p[e];
      slack[rows[e]] += values[e] * z[e];
    }
    for (int i = 0; i < m; ++i) slack[i] = std::min(rhs[i] - slack[i], 0.0);
    // x^(k+1) = (1/m) sum_i P_i(x + p_i) = x + (1/m) sum_i (p_i - p_i').
    for (int e = 0; e < nnz; ++e) {
      p_next[e] = -values[e] * slack[rows[e]];
      delta[e] = p[e] - p_next[e];
    }
    std::fill(update.begin(), update.end(), 0.0);
    ScatterAdd(cols, delta, update);
    for (size_t j = 0; j < current.size(); ++j) current[j] += update[j] / m;
    p.swap(p_next);
    ++k;
    const double dist = monitor.Update(Distance(x, current));
    if (config.observer) config.observer({0, k, dist, rows, cols, p});
  }
  result.point = std::move(current);
  result.iterations = {k};
  result.converged = {static_cast<char>(converged)};
  result.component_violation = {viol};
  result.distance_decreases = monitor.decreases();
  FinishResult(x, &system, result);
  return result;
}

ProjectionResult CadRaw(std::span<const double> x,
                        const SparseConstraintSystem& system,
                        const ConstraintPartition& partition,
                        const SolverConfig& config) {
  return RunComponentAveraged(x, system, partition, config, false);
}

ProjectionResult CadScaled(std::span<const double> x,
                           const SparseConstraintSystem& system,
                           const ConstraintPartition& partition,
                           const SolverConfig& config) {
  return RunComponentAveraged(x, system, partition, config, true);
}

ProjectionResult Project(std::span<const double> x,
                         const SparseConstraintSystem& system,
                         const ConstraintPartition& partition,
                         const SolverConfig& config) {
  switch (config.algorithm) {
    case Algorithm::kTwoSet:
      return DykstraTwoSet(x, system, config);
    case Algorithm::kSimultaneous:
      return DykstraSimultaneous(x, system, config);
    case Algorithm::kCadRaw:
      return CadRaw(x, system, partition, config);
    case Algorithm::kCadScaled:
      return CadScaled(x, system, partition, config);
  }
  throw std::invalid_argument("unknown algorithm");
}

ProjectionResult Project(std::span<const double> x,
                         const SparseConstraintSystem& system,
                         const SolverConfig& config) {
  return Project(x, system, ComputePartition(system), config);
}

Projector MakeCadProjector(const SparseConstraintSystem& system,
                           double epsilon, int max_iterations) {
  RequireValid(system);
  SolverConfig config;
  config.epsilon = epsilon;
  config.max_iterations = max_iterations;
  config.algorithm = Algorithm::kCadScaled;
  return [system, partition = ComputePartition(system),
          config](std::span<const double> x) {
    ProjectionResult result = CadScaled(x, system, partition, config);
    if (!result.all_converged()) {
      throw std::runtime_error("CAD projection did not converge within " +
                               std::to_string(config.max_iterations) +
                               " iterations");
    }
    return std::move(result.point);
  };
}

}  // namespace cadproj
