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

#include "cadproj/gradient.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cadproj/partition.h"

namespace cadproj {
namespace {

double Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double a : v) sum += a * a;
  return std::sqrt(sum);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t j = 0; j < a.size(); ++j) sum += a[j] * b[j];
  return sum;
}

struct Geometry {
  std::vector<double> projected;
  std::optional<std::vector<double>> direction;
};

Geometry ProjectAndOrient(std::span<const double> x,
                          const SparseConstraintSystem& system,
                          const Projector& project) {
  if (static_cast<int>(x.size()) != system.num_variables()) {
    throw std::invalid_argument("jacobian: dimension mismatch");
  }
  Geometry g;
  g.projected = project(x);
  std::vector<double> residual(x.size());
  for (size_t j = 0; j < x.size(); ++j) residual[j] = x[j] - g.projected[j];
  const double distance = Norm(residual);
  if (distance > kInsideTolerance * (1.0 + Norm(x))) {
    for (double& r : residual) r /= distance;
    g.direction = std::move(residual);
  }
  return g;
}

constexpr double kInnerTolerance = 1e-13;
constexpr double kOuterTolerance = 1e-12;
constexpr int kDykstraIterations = 200000;

}  // namespace

struct JacobianOperator::ConeData {
  SparseConstraintSystem cone;  // active rows with zero right-hand side
  ConstraintPartition partition;
  // With independent active rows, d = sum_i lambda_i A_i / ||A_i|| has unique
  // multipliers and T cap H is the critical cone
  //   {w : A_i w = 0 where lambda_i > 0, A_i w <= 0 where lambda_i = 0}.
  // `equality_basis` is an orthonormal basis of the rows with lambda_i > 0
  // and `free_cone` holds the remaining active rows.
  bool critical = false;
  Eigen::MatrixXd equality_basis;
  SparseConstraintSystem free_cone;
  ConstraintPartition free_partition;
  // The equality rows span R^n, so T cap H = {0}.
  bool trivial = false;
};

namespace {

Projector ConeProjector(const SparseConstraintSystem& cone,
                        const ConstraintPartition& partition, double scale) {
  // The tolerance follows the magnitude of each input; an absolute one falls
  // below rounding once Dykstra corrections grow.
  return [&cone, &partition, scale](std::span<const double> w) {
    SolverConfig config;
    config.epsilon = kInnerTolerance * std::max(scale, Norm(w));
    config.max_iterations = kDykstraIterations;
    ProjectionResult r = CadScaled(w, cone, partition, config);
    if (!r.all_converged()) {
      throw std::runtime_error("tangent cone projection did not converge");
    }
    return std::move(r.point);
  };
}

}  // namespace

std::vector<double> JacobianOperator::Apply(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != dimension()) {
    throw std::invalid_argument("jacobian apply: dimension mismatch");
  }
  std::vector<double> out(v.begin(), v.end());
  if (kind_ == JacobianKind::kSurrogate || active_set_.empty()) {
    if (!direction_) return out;
    const double along = Dot(*direction_, v);
    for (size_t j = 0; j < out.size(); ++j) out[j] -= along * (*direction_)[j];
    return out;
  }
  const ConeData& data = *cone_;
  const double scale = std::max(1.0, Norm(v));
  if (!direction_) return ConeProjector(data.cone, data.partition, scale)(v);
  if (data.trivial) return std::vector<double>(v.size(), 0.0);

  SolverConfig outer;
  outer.epsilon = kOuterTolerance * scale;
  outer.max_iterations = kDykstraIterations;
  ProjectionResult r;
  if (data.critical) {
    const Eigen::MatrixXd& q = data.equality_basis;
    const Projector onto_subspace = [&q](std::span<const double> w) {
      const Eigen::Map<const Eigen::VectorXd> wv(w.data(), w.size());
      const Eigen::VectorXd projected = wv - q * (q.transpose() * wv);
      return std::vector<double>(projected.data(),
                                 projected.data() + projected.size());
    };
    if (data.free_cone.num_constraints() == 0) return onto_subspace(v);
    const ViolationFunction violation = [&](std::span<const double> w) {
      const Eigen::Map<const Eigen::VectorXd> wv(w.data(), w.size());
      const double off_subspace =
          q.cols() > 0 ? (q.transpose() * wv).cwiseAbs().maxCoeff() : 0.0;
      return std::max(NormalizedMaxViolation(data.free_cone, w), off_subspace);
    };
    r = DykstraTwoSet(v, onto_subspace,
                      ConeProjector(data.free_cone, data.free_partition, scale),
                      outer, violation);
  } else {
    // Dependent active rows: intersect the whole cone with H directly.
    const std::vector<double>& d = *direction_;
    const Projector onto_hyperplane = [&d](std::span<const double> w) {
      std::vector<double> projected(w.begin(), w.end());
      const double along = Dot(d, w);
      for (size_t j = 0; j < projected.size(); ++j) projected[j] -= along * d[j];
      return projected;
    };
    const ViolationFunction violation = [&](std::span<const double> w) {
      return std::max(NormalizedMaxViolation(data.cone, w), std::abs(Dot(d, w)));
    };
    r = DykstraTwoSet(v, ConeProjector(data.cone, data.partition, scale),
                      onto_hyperplane, outer, violation);
  }
  if (!r.all_converged()) {
    throw std::runtime_error("exact jacobian Dykstra did not converge");
  }
  return std::move(r.point);
}

Eigen::MatrixXd JacobianOperator::ToDense() const {
  const int n = dimension();
  Eigen::MatrixXd dense(n, n);
  std::vector<double> basis(n, 0.0);
  for (int j = 0; j < n; ++j) {
    basis[j] = 1.0;
    const std::vector<double> column = Apply(basis);
    for (int i = 0; i < n; ++i) dense(i, j) = column[i];
    basis[j] = 0.0;
  }
  return dense;
}

JacobianOperator SurrogateJacobian(std::span<const double> x,
                                   const SparseConstraintSystem& system,
                                   const Projector& project) {
  Geometry g = ProjectAndOrient(x, system, project);
  JacobianOperator op;
  op.kind_ = JacobianKind::kSurrogate;
  op.base_point_.assign(x.begin(), x.end());
  op.projected_ = std::move(g.projected);
  op.direction_ = std::move(g.direction);
  return op;
}

JacobianOperator ExactJacobian(std::span<const double> x,
                               const SparseConstraintSystem& system,
                               const Projector& project) {
  Geometry g = ProjectAndOrient(x, system, project);
  JacobianOperator op;
  op.kind_ = JacobianKind::kExact;
  op.base_point_.assign(x.begin(), x.end());
  op.projected_ = std::move(g.projected);
  op.direction_ = std::move(g.direction);

  const int n = system.num_variables();
  std::vector<Triplet> cone_entries;
  for (int i = 0; i < system.num_constraints(); ++i) {
    const SparseRowView row = system.row(i);
    const double norm = system.row_norms()[i];
    const double slack = (system.rhs(i) - row.Dot(op.projected_)) / norm;
    if (slack > kActiveTolerance / kActiveTieFactor &&
        slack < kActiveTolerance * kActiveTieFactor) {
      op.ambiguous_ = true;
    }
    if (slack > kActiveTolerance) continue;
    const int r = static_cast<int>(op.active_set_.size());
    op.active_set_.push_back(i);
    for (int k = 0; k < row.size(); ++k) {
      cone_entries.push_back({r, row.cols[k], row.values[k] / norm});
    }
  }

  auto data = std::make_shared<JacobianOperator::ConeData>();
  const int k = static_cast<int>(op.active_set_.size());
  data->cone = SparseConstraintSystem(n, cone_entries, std::vector<double>(k, 0.0));
  data->partition = ComputePartition(data->cone);
  if (k > 0) {
    Eigen::MatrixXd active = Eigen::MatrixXd::Zero(k, n);
    for (const Triplet& t : cone_entries) active(t.row, t.col) = t.value;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(active);
    lu.setThreshold(1e-10);
    const int rank = static_cast<int>(lu.rank());
    if (rank < k) op.degenerate_ = true;
    if (!op.direction_) {
      // A feasible x on the boundary of C: P_C has a kink here.
      op.degenerate_ = true;
    } else if (rank == k) {
      const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(
          op.direction_->data(), n);
      const Eigen::VectorXd lambda =
          active.transpose().colPivHouseholderQr().solve(d);
      const double cutoff = 1e-6 * lambda.cwiseAbs().maxCoeff();
      // Differentiability needs every multiplier strictly positive.
      if ((lambda.array() <= cutoff).any()) op.degenerate_ = true;
      std::vector<int> equality;
      std::vector<Triplet> free_entries;
      int free_rows = 0;
      for (int r = 0; r < k; ++r) {
        if (lambda[r] > cutoff) {
          equality.push_back(r);
          continue;
        }
        for (const Triplet& t : cone_entries) {
          if (t.row == r) free_entries.push_back({free_rows, t.col, t.value});
        }
        ++free_rows;
      }
      Eigen::MatrixXd rows(n, static_cast<int>(equality.size()));
      for (size_t e = 0; e < equality.size(); ++e) {
        rows.col(e) = active.row(equality[e]).transpose();
      }
      const Eigen::HouseholderQR<Eigen::MatrixXd> qr(rows);
      data->equality_basis = qr.householderQ() *
                             Eigen::MatrixXd::Identity(n, rows.cols());
      data->free_cone = SparseConstraintSystem(
          n, std::move(free_entries), std::vector<double>(free_rows, 0.0));
      data->free_partition = ComputePartition(data->free_cone);
      data->critical = true;
      data->trivial = static_cast<int>(equality.size()) == n;
    }
  }
  op.cone_ = std::move(data);
  return op;
}

Eigen::MatrixXd FiniteDifferenceJacobian(std::span<const double> x,
                                         const Projector& project,
                                         double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd jacobian(n, n);
  std::vector<double> plus(x.begin(), x.end()), minus(x.begin(), x.end());
  for (int j = 0; j < n; ++j) {
    plus[j] += step;
    minus[j] -= step;
    const std::vector<double> hi = project(plus);
    const std::vector<double> lo = project(minus);
    for (int i = 0; i < n; ++i) jacobian(i, j) = (hi[i] - lo[i]) / (2.0 * step);
    plus[j] = x[j];
    minus[j] = x[j];
  }
  return jacobian;
}

Eigen::MatrixXd FiniteDifferenceJacobian(std::span<const double> x,
                                         const SparseConstraintSystem& system,
                                         double step, double epsilon) {
  return FiniteDifferenceJacobian(x, MakeCadProjector(system, epsilon), step);
}

}  // namespace cadproj
