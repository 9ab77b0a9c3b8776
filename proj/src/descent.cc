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

#include "cadproj/descent.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cadproj/format.h"
#include "cadproj/partition.h"
#include "cadproj/projection.h"
#include "cadproj/svc.h"

namespace cadproj {
namespace {

void CheckDimension(std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    throw std::invalid_argument("objective has dimension " +
                                std::to_string(expected) + ", point has " +
                                std::to_string(actual));
  }
}

ObjectiveValue EvaluateLinear(const LinearObjective& o,
                              std::span<const double> x) {
  CheckDimension(o.c.size(), x.size());
  ObjectiveValue out{0.0, o.c};
  for (std::size_t j = 0; j < x.size(); ++j) out.value += o.c[j] * x[j];
  return out;
}

ObjectiveValue EvaluateQuadratic(const QuadraticObjective& o,
                                 std::span<const double> x) {
  CheckDimension(o.c.size(), x.size());
  ObjectiveValue out{0.0, o.c};
  for (std::size_t j = 0; j < x.size(); ++j) out.value += o.c[j] * x[j];
  for (const Triplet& q : o.q) {
    if (q.row < 0 || q.col < 0 || q.row >= static_cast<int>(x.size()) ||
        q.col >= static_cast<int>(x.size())) {
      throw std::invalid_argument("Q entry outside the point dimension");
    }
    out.value += q.value * x[q.row] * x[q.col];
    // d/dx of x^T Q x is (Q + Q^T) x.
    out.gradient[q.row] += q.value * x[q.col];
    out.gradient[q.col] += q.value * x[q.row];
  }
  return out;
}

// f = (1/n) sum_i [log(T_i) - log(I_i)] with T_i = sigma^2 + sum_j H_ij x_j
// and I_i = T_i - H_ii x_i, so
// df/dx_k = (1/n) sum_i [H_ik / T_i - [i != k] H_ik / I_i].
ObjectiveValue EvaluateTransmitPower(const TransmitPowerObjective& o,
                                     std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  CheckDimension(o.requirements.size(), x.size());
  for (int i = 0; i < n; ++i) {
    if (!(x[i] >= -kPowerDomainTolerance)) {
      throw std::domain_error("transmit power x[" + std::to_string(i) +
                              "] = " + std::to_string(x[i]) + " is negative");
    }
  }
  const double noise = o.sigma * o.sigma;
  std::vector<double> total(n, noise), interference(n, noise);
  for (const Triplet& h : o.gains) {
    if (h.row < 0 || h.col < 0 || h.row >= n || h.col >= n) {
      throw std::invalid_argument("H entry outside the point dimension");
    }
    total[h.row] += h.value * x[h.col];
    if (h.row != h.col) interference[h.row] += h.value * x[h.col];
  }
  ObjectiveValue out{0.0, std::vector<double>(n, 0.0)};
  for (int i = 0; i < n; ++i) {
    if (!(interference[i] > 0.0) || !(total[i] > 0.0)) {
      throw std::domain_error("transmit power SINR undefined at transmitter " +
                              std::to_string(i));
    }
    out.value += std::log(total[i]) - std::log(interference[i]);
  }
  for (const Triplet& h : o.gains) {
    out.gradient[h.col] += h.value / total[h.row];
    if (h.row != h.col) out.gradient[h.col] -= h.value / interference[h.row];
  }
  const double scale = 1.0 / n;
  out.value *= scale;
  for (double& g : out.gradient) g *= scale;
  return out;
}

double Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

ObjectiveValue EvaluateObjective(const Objective& objective,
                                 std::span<const double> x) {
  struct Visitor {
    std::span<const double> x;
    ObjectiveValue operator()(std::monostate) const {
      return {0.0, std::vector<double>(x.size(), 0.0)};
    }
    ObjectiveValue operator()(const LinearObjective& o) const {
      return EvaluateLinear(o, x);
    }
    ObjectiveValue operator()(const QuadraticObjective& o) const {
      return EvaluateQuadratic(o, x);
    }
    ObjectiveValue operator()(const TransmitPowerObjective& o) const {
      return EvaluateTransmitPower(o, x);
    }
  };
  return std::visit(Visitor{x}, objective);
}

void DescentConfig::Validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (!(penalty >= 0.0)) throw std::invalid_argument("c_h must be >= 0");
  if (svc_steps < 0) throw std::invalid_argument("svc_steps must be >= 0");
  if (!(epsilon > 0.0) || !(jacobian_epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be > 0");
  }
  if (max_cad_iterations < 1) {
    throw std::invalid_argument("max_cad_iterations must be >= 1");
  }
}

double Trace::FinalObjective() const {
  if (rows.empty()) throw std::logic_error("empty trace");
  return rows.back().objective;
}

double Trace::BestObjective() const {
  if (rows.empty()) throw std::logic_error("empty trace");
  double best = rows.front().objective;
  for (const TraceRow& row : rows) best = std::max(best, row.objective);
  return best;
}

double Trace::MedianCadIterations() const {
  if (rows.empty()) throw std::logic_error("empty trace");
  std::vector<double> iterations;
  for (const TraceRow& row : rows) iterations.push_back(row.cad_iterations);
  std::sort(iterations.begin(), iterations.end());
  const std::size_t mid = iterations.size() / 2;
  return iterations.size() % 2 == 1
             ? iterations[mid]
             : 0.5 * (iterations[mid - 1] + iterations[mid]);
}

Trace Descend(const ProblemInstance& instance, const DescentConfig& config) {
  const std::vector<double> w0 = GenerateInitialPoint(
      instance.system.num_variables(), 1.0, config.seed);
  return Descend(instance, config, w0);
}

Trace Descend(const ProblemInstance& instance, const DescentConfig& config,
              std::span<const double> initial_w) {
  config.Validate();
  const SparseConstraintSystem& system = instance.system;
  RequireValid(system);
  const int n = system.num_variables();
  if (static_cast<int>(initial_w.size()) != n) {
    throw std::invalid_argument("initial point has the wrong dimension");
  }
  const ConstraintPartition partition = ComputePartition(system);
  SolverConfig solver;
  solver.epsilon = config.epsilon;
  solver.max_iterations = config.max_cad_iterations;
  solver.algorithm = Algorithm::kCadScaled;
  // SVC starts from CAD output, which may violate rows by up to epsilon.
  const double clip_tolerance = 2.0 * config.epsilon;

  Trace trace;
  trace.initial_w.assign(initial_w.begin(), initial_w.end());
  std::vector<double> w = trace.initial_w;
  for (int t = 1; t <= config.iterations; ++t) {
    const ProjectionResult projected = Project(w, system, partition, solver);
    if (!projected.all_converged()) {
      trace.truncated = true;
      trace.truncation_reason =
          "CAD did not converge at step " + std::to_string(t);
      break;
    }
    const double step = config.decay ? config.eta / std::sqrt(t) : config.eta;

    std::vector<double> y = projected.point;
    for (int k = 0; k < config.svc_steps; ++k) {
      std::vector<double> direction = EvaluateObjective(instance.objective, y).gradient;
      for (double& v : direction) v *= step;
      y = Clip(y, direction, system, partition, ClipMode::kSparse,
               clip_tolerance)
              .output;
    }
    const ObjectiveValue at_y = EvaluateObjective(instance.objective, y);

    std::vector<double> chain;
    try {
      if (config.gradient_kind == JacobianKind::kSurrogate) {
        const Projector cached = [&](std::span<const double>) {
          return projected.point;
        };
        chain = SurrogateJacobian(w, system, cached).Apply(at_y.gradient);
      } else {
        const Projector precise =
            MakeCadProjector(system, config.jacobian_epsilon,
                             config.max_cad_iterations);
        chain = ExactJacobian(w, system, precise).Apply(at_y.gradient);
      }
    } catch (const std::runtime_error& e) {
      trace.truncated = true;
      trace.truncation_reason = "Jacobian failed at step " +
                                std::to_string(t) + ": " + e.what();
      break;
    }

    std::vector<double> update(n);
    for (int j = 0; j < n; ++j) {
      update[j] = step * (chain[j] - config.penalty * projected.dual[j]);
    }

    TraceRow row;
    row.iteration = t;
    row.objective = at_y.value;
    row.violation = std::max(0.0, NormalizedMaxViolation(system, y));
    row.dual_norm = Norm(projected.dual);
    row.cad_iterations = projected.max_iterations();
    row.update_norm = Norm(update);
    trace.rows.push_back(row);
    trace.final_point = std::move(y);

    for (int j = 0; j < n; ++j) w[j] += update[j];
  }
  trace.final_w = w;
  return trace;
}

void WriteTraceCsv(const Trace& trace, std::ostream& out) {
  out << "iteration,objective,violation,dual_norm,cad_iters\n";
  for (const TraceRow& row : trace.rows) {
    out << row.iteration << ',' << FormatDouble(row.objective) << ','
        << FormatDouble(row.violation) << ',' << FormatDouble(row.dual_norm)
        << ',' << row.cad_iterations << '\n';
  }
}

}  // namespace cadproj
