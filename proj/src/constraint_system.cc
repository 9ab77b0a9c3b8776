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

#include "cadproj/constraint_system.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cadproj {

double SparseRowView::Dot(std::span<const double> x) const {
  double sum = 0.0;
  for (size_t k = 0; k < cols.size(); ++k) sum += values[k] * x[cols[k]];
  return sum;
}

double SparseRowView::SquaredNorm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return sum;
}

SparseConstraintSystem::SparseConstraintSystem(int num_variables,
                                               std::vector<Triplet> triplets,
                                               std::vector<double> rhs)
    : num_variables_(num_variables), rhs_(std::move(rhs)) {
  if (num_variables < 0) {
    throw std::invalid_argument("negative variable count");
  }
  const int m = static_cast<int>(rhs_.size());
  std::erase_if(triplets, [](const Triplet& t) { return t.value == 0.0; });
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= num_variables) {
      throw std::out_of_range("triplet (" + std::to_string(t.row) + ", " +
                              std::to_string(t.col) + ") outside " +
                              std::to_string(m) + " x " +
                              std::to_string(num_variables) + " system");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  const size_t nnz = triplets.size();
  rows_.resize(nnz);
  cols_.resize(nnz);
  values_.resize(nnz);
  row_ptr_.assign(m + 1, 0);
  counts_.assign(num_variables, 0);
  row_norms_.assign(m, 0.0);
  for (size_t e = 0; e < nnz; ++e) {
    rows_[e] = triplets[e].row;
    cols_[e] = triplets[e].col;
    values_[e] = triplets[e].value;
    ++row_ptr_[rows_[e] + 1];
    ++counts_[cols_[e]];
    row_norms_[rows_[e]] += values_[e] * values_[e];
  }
  for (int i = 0; i < m; ++i) {
    row_ptr_[i + 1] += row_ptr_[i];
    row_norms_[i] = std::sqrt(row_norms_[i]);
  }

  col_ptr_.assign(num_variables + 1, 0);
  for (int j = 0; j < num_variables; ++j) {
    col_ptr_[j + 1] = col_ptr_[j] + counts_[j];
  }
  col_rows_.resize(nnz);
  std::vector<int> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  // Rows are visited in ascending order, so each L_j comes out sorted.
  for (size_t e = 0; e < nnz; ++e) col_rows_[fill[cols_[e]]++] = rows_[e];
}

SparseRowView SparseConstraintSystem::row(int i) const {
  const int begin = row_ptr_[i];
  const int end = row_ptr_[i + 1];
  return {std::span<const int>(cols_).subspan(begin, end - begin),
          std::span<const double>(values_).subspan(begin, end - begin)};
}

std::span<const int> SparseConstraintSystem::support(int i) const {
  return row(i).cols;
}

std::span<const int> SparseConstraintSystem::constraints_of(int j) const {
  return std::span<const int>(col_rows_).subspan(
      col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]);
}

std::vector<Triplet> SparseConstraintSystem::triplets() const {
  std::vector<Triplet> out(rows_.size());
  for (size_t e = 0; e < rows_.size(); ++e) {
    out[e] = {rows_[e], cols_[e], values_[e]};
  }
  return out;
}

std::vector<double> SparseConstraintSystem::Multiply(
    std::span<const double> x) const {
  if (static_cast<int>(x.size()) != num_variables_) {
    throw std::invalid_argument("dimension mismatch in Multiply");
  }
  std::vector<double> out(num_constraints(), 0.0);
  for (size_t e = 0; e < rows_.size(); ++e) {
    out[rows_[e]] += values_[e] * x[cols_[e]];
  }
  return out;
}

bool operator==(const SparseConstraintSystem& a,
                const SparseConstraintSystem& b) {
  return a.num_variables_ == b.num_variables_ && a.rows_ == b.rows_ &&
         a.cols_ == b.cols_ && a.values_ == b.values_ && a.rhs_ == b.rhs_;
}

bool ValidationReport::Has(ValidationFinding::Kind kind) const {
  return std::any_of(findings.begin(), findings.end(),
                     [kind](const ValidationFinding& f) {
                       return f.kind == kind;
                     });
}

ValidationReport Validate(const SparseConstraintSystem& system) {
  using Kind = ValidationFinding::Kind;
  ValidationReport report;
  const auto rows = system.entry_rows();
  const auto cols = system.entry_cols();
  const auto values = system.entry_values();
  for (size_t e = 0; e < rows.size(); ++e) {
    if (!std::isfinite(values[e])) {
      report.findings.push_back(
          {Kind::kNonFiniteValue, rows[e], cols[e],
           "non-finite value at (" + std::to_string(rows[e]) + ", " +
               std::to_string(cols[e]) + ")"});
    }
    if (e > 0 && rows[e] == rows[e - 1] && cols[e] == cols[e - 1]) {
      report.findings.push_back(
          {Kind::kDuplicateEntry, rows[e], cols[e],
           "duplicate entry (" + std::to_string(rows[e]) + ", " +
               std::to_string(cols[e]) + ")"});
    }
  }
  for (int i = 0; i < system.num_constraints(); ++i) {
    if (!std::isfinite(system.rhs(i))) {
      report.findings.push_back({Kind::kNonFiniteRhs, i, -1,
                                 "non-finite rhs in row " + std::to_string(i)});
    }
    if (system.row(i).size() == 0) {
      report.findings.push_back(
          {Kind::kEmptyRow, i, -1, "empty row " + std::to_string(i)});
    } else if (!(system.row_norms()[i] > 0.0)) {
      report.findings.push_back(
          {Kind::kZeroNormRow, i, -1, "zero-norm row " + std::to_string(i)});
    }
  }
  return report;
}

void RequireValid(const SparseConstraintSystem& system) {
  const ValidationReport report = Validate(system);
  if (!report.ok()) {
    throw std::invalid_argument("invalid constraint system: " +
                                report.findings.front().message);
  }
}

double MaxViolation(const SparseConstraintSystem& system,
                    std::span<const double> x) {
  const std::vector<double> ax = system.Multiply(x);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < system.num_constraints(); ++i) {
    worst = std::max(worst, ax[i] - system.rhs(i));
  }
  return worst;
}

double NormalizedMaxViolation(const SparseConstraintSystem& system,
                              std::span<const double> x) {
  const std::vector<double> ax = system.Multiply(x);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < system.num_constraints(); ++i) {
    worst = std::max(worst, (ax[i] - system.rhs(i)) / system.row_norms()[i]);
  }
  return worst;
}

}  // namespace cadproj
