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

#ifndef CADPROJ_CONSTRAINT_SYSTEM_H_
#define CADPROJ_CONSTRAINT_SYSTEM_H_

#include <span>
#include <string>
#include <vector>

namespace cadproj {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Read-only view of one constraint row A_i. Columns are sorted.
struct SparseRowView {
  std::span<const int> cols;
  std::span<const double> values;

  double Dot(std::span<const double> x) const;
  double SquaredNorm() const;
  int size() const { return static_cast<int>(cols.size()); }
};

// The linear system Ax <= b stored row-major (sorted by row, then column),
// together with the derived row norms, per-variable constraint counts l_j and
// the column-major incidence L_j.
//
// Explicit zero values are dropped at construction, so the stored pattern is
// exactly the set of pairs with A_ij != 0. Duplicate (i, j) pairs and
// non-finite values are kept so that Validate() can report them; solvers
// refuse systems that do not validate.
class SparseConstraintSystem {
 public:
  SparseConstraintSystem() = default;

  // Throws std::out_of_range when a triplet index falls outside the m x n
  // shape, where m = rhs.size().
  SparseConstraintSystem(int num_variables, std::vector<Triplet> triplets,
                         std::vector<double> rhs);

  int num_variables() const { return num_variables_; }
  int num_constraints() const { return static_cast<int>(rhs_.size()); }
  int num_nonzeros() const { return static_cast<int>(cols_.size()); }

  SparseRowView row(int i) const;
  // N_i, the sorted variable indices touched by constraint i.
  std::span<const int> support(int i) const;
  // L_j, the sorted constraint indices touching variable j.
  std::span<const int> constraints_of(int j) const;

  double rhs(int i) const { return rhs_[i]; }
  std::span<const double> rhs() const { return rhs_; }
  std::span<const double> row_norms() const { return row_norms_; }
  // l_j = |L_j|.
  std::span<const int> constraint_counts() const { return counts_; }

  // Coordinate arrays in storage order (the A_row / A_col / A_V triple).
  std::span<const int> entry_rows() const { return rows_; }
  std::span<const int> entry_cols() const { return cols_; }
  std::span<const double> entry_values() const { return values_; }

  std::vector<Triplet> triplets() const;

  // Returns Ax.
  std::vector<double> Multiply(std::span<const double> x) const;

  friend bool operator==(const SparseConstraintSystem& a,
                         const SparseConstraintSystem& b);

 private:
  int num_variables_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> rows_;
  std::vector<int> cols_;
  std::vector<double> values_;
  std::vector<double> rhs_;
  std::vector<double> row_norms_;
  std::vector<int> counts_;
  std::vector<int> col_ptr_{0};
  std::vector<int> col_rows_;
};

struct ValidationFinding {
  enum class Kind {
    kEmptyRow,
    kZeroNormRow,
    kDuplicateEntry,
    kNonFiniteValue,
    kNonFiniteRhs,
  };
  Kind kind;
  int row = -1;
  int col = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;

  bool ok() const { return findings.empty(); }
  bool Has(ValidationFinding::Kind kind) const;
};

ValidationReport Validate(const SparseConstraintSystem& system);

// Throws std::invalid_argument describing the first finding.
void RequireValid(const SparseConstraintSystem& system);

// max_i (A_i x - b_i) on the rows as stored. Returns -inf for m = 0.
double MaxViolation(const SparseConstraintSystem& system,
                    std::span<const double> x);

// max_i (A_i x - b_i) / ||A_i||, the quantity the projection solvers stop on.
double NormalizedMaxViolation(const SparseConstraintSystem& system,
                              std::span<const double> x);

}  // namespace cadproj

#endif  // CADPROJ_CONSTRAINT_SYSTEM_H_
