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

// Jacobians of the polytope projection P_C.
//
// With d = (x - P_C(x)) / ||x - P_C(x)||, H the hyperplane orthogonal to d and
// T the tangent cone of C at P_C(x):
//   surrogate: P_H = I - d d^T  (identity when x is in C),
//   exact:     P_{T cap H}, the true Jacobian wherever P_C is differentiable.

#ifndef CADPROJ_GRADIENT_H_
#define CADPROJ_GRADIENT_H_

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cadproj/constraint_system.h"
#include "cadproj/projection.h"

namespace cadproj {

enum class JacobianKind { kSurrogate, kExact };

// x counts as inside C when ||x - P_C(x)|| <= kInsideTolerance (1 + ||x||).
inline constexpr double kInsideTolerance = 1e-9;
// Constraint i is active at P_C(x) when b_i - A_i P_C(x) <= this * ||A_i||.
inline constexpr double kActiveTolerance = 1e-7;
// Residuals within this factor of kActiveTolerance (either side) are ties.
inline constexpr double kActiveTieFactor = 100.0;

// A matrix-free symmetric linear operator. Immutable; Apply is safe to call
// concurrently.
class JacobianOperator {
 public:
  JacobianKind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(base_point_.size()); }
  const std::vector<double>& base_point() const { return base_point_; }
  const std::vector<double>& projected_point() const { return projected_; }
  // Unit d_x, absent when x is in C.
  const std::optional<std::vector<double>>& direction() const {
    return direction_;
  }
  // Constraints active at P_C(x) (exact operators only).
  const std::vector<int>& active_set() const { return active_set_; }
  // Some residual sits too close to the activity threshold to classify.
  bool ambiguous() const { return ambiguous_; }
  // Active rows are dependent or an active multiplier vanishes, so P_C is
  // not differentiable at x and the exact operator is only a cone projection.
  bool degenerate() const { return degenerate_; }

  std::vector<double> Apply(std::span<const double> v) const;
  // The operator is self-adjoint; provided for call sites that think in
  // vector-Jacobian products.
  std::vector<double> ApplyTranspose(std::span<const double> v) const {
    return Apply(v);
  }
  // Applies the operator to every basis vector.
  Eigen::MatrixXd ToDense() const;

 private:
  friend JacobianOperator SurrogateJacobian(std::span<const double>,
                                            const SparseConstraintSystem&,
                                            const Projector&);
  friend JacobianOperator ExactJacobian(std::span<const double>,
                                        const SparseConstraintSystem&,
                                        const Projector&);
  struct ConeData;

  JacobianKind kind_ = JacobianKind::kSurrogate;
  std::vector<double> base_point_;
  std::vector<double> projected_;
  std::optional<std::vector<double>> direction_;
  std::vector<int> active_set_;
  bool ambiguous_ = false;
  bool degenerate_ = false;
  std::shared_ptr<const ConeData> cone_;
};

JacobianOperator SurrogateJacobian(std::span<const double> x,
                                   const SparseConstraintSystem& system,
                                   const Projector& project);

// With independent active rows T cap H is the critical cone: A_i w = 0 for
// the rows carrying a positive multiplier of d, A_i w <= 0 for the rest.
// apply(v) projects onto the equality subspace in closed form and, when some
// multiplier vanishes, runs two-set Dykstra between that subspace and the
// remaining cone (projected with CAD). Dependent active rows fall back to
// two-set Dykstra between the whole active cone and the hyperplane
// {w : <d, w> = 0}, which converges slowly because H only touches the cone.
// When the equality rows span R^n the result is zero.
JacobianOperator ExactJacobian(std::span<const double> x,
                               const SparseConstraintSystem& system,
                               const Projector& project);

// Column j = (P(x + h e_j) - P(x - h e_j)) / 2h. Projection failures
// propagate.
Eigen::MatrixXd FiniteDifferenceJacobian(std::span<const double> x,
                                         const Projector& project, double step);
// Same, projecting with CAD at the given tolerance.
Eigen::MatrixXd FiniteDifferenceJacobian(std::span<const double> x,
                                         const SparseConstraintSystem& system,
                                         double step, double epsilon = 1e-12);

}  // namespace cadproj

#endif  // CADPROJ_GRADIENT_H_
