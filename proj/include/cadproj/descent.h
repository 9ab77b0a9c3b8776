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

// Objective evaluation and gradient ascent through the projection layer.
//
// A free parameter point w stands in for a network output. Each step projects
// w onto C with CAD, optionally walks the projected point along the objective
// gradient with sparse vector clipping, and moves w by
//   w <- w + eta_t (J^T grad f(y) - c_h (w - P_C(w)))
// where J is the surrogate or exact projection Jacobian at w. All objectives
// are maximised.

#ifndef CADPROJ_DESCENT_H_
#define CADPROJ_DESCENT_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cadproj/gradient.h"
#include "cadproj/probgen.h"

namespace cadproj {

// Transmit power accepts coordinates down to -kPowerDomainTolerance so that
// points projected to a finite tolerance can be evaluated.
inline constexpr double kPowerDomainTolerance = 1e-6;

struct ObjectiveValue {
  double value = 0.0;
  std::vector<double> gradient;
};

// Value and analytic gradient. The empty objective is identically zero.
// Throws std::invalid_argument on a dimension mismatch and std::domain_error
// when a transmit power point leaves the domain.
ObjectiveValue EvaluateObjective(const Objective& objective,
                                 std::span<const double> x);

struct DescentConfig {
  JacobianKind gradient_kind = JacobianKind::kSurrogate;
  double eta = 0.05;
  int iterations = 100;
  double penalty = 0.0;  // c_h
  int svc_steps = 0;
  std::uint64_t seed = 0;
  // eta_t = eta / sqrt(t) when set.
  bool decay = false;
  double epsilon = 1e-6;
  int max_cad_iterations = 100000;
  // Tolerance of the tighter projection used to classify active constraints
  // for the exact Jacobian.
  double jacobian_epsilon = 1e-10;

  // Throws std::invalid_argument unless eta > 0, iterations >= 1,
  // penalty >= 0, svc_steps >= 0 and epsilon > 0.
  void Validate() const;
};

struct TraceRow {
  int iteration = 0;
  double objective = 0.0;
  double violation = 0.0;  // normalized, clamped at 0
  double dual_norm = 0.0;  // ||w - P_C(w)||
  int cad_iterations = 0;
  double update_norm = 0.0;  // ||eta_t (J^T grad f - c_h (w - P_C(w)))||
};

struct Trace {
  std::vector<TraceRow> rows;
  bool truncated = false;
  std::string truncation_reason;
  std::vector<double> initial_w;
  std::vector<double> final_w;
  std::vector<double> final_point;  // last recorded y

  double FinalObjective() const;
  double BestObjective() const;
  double MedianCadIterations() const;
};

// w starts at GenerateInitialPoint(n, 1, config.seed). A projection that
// fails to converge, or an exact Jacobian that cannot be applied, ends the
// trace early with `truncated` set.
Trace Descend(const ProblemInstance& instance, const DescentConfig& config);

// The same loop from a caller-supplied starting point.
Trace Descend(const ProblemInstance& instance, const DescentConfig& config,
              std::span<const double> initial_w);

// Header: iteration,objective,violation,dual_norm,cad_iters
void WriteTraceCsv(const Trace& trace, std::ostream& out);

}  // namespace cadproj

#endif  // CADPROJ_DESCENT_H_
