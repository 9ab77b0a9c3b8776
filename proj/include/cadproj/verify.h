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

// Randomised self-checks of the solvers against the brute-force oracles,
// run by `cadproj verify` and the acceptance suite. Every trial derives its
// own seed, printed with each failure so that it can be replayed alone.

#ifndef CADPROJ_VERIFY_H_
#define CADPROJ_VERIFY_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cadproj/constraint_system.h"

namespace cadproj {

struct VerifyConfig {
  int trials = 100;
  std::uint64_t seed = 0;
  // Forwarded to SolverConfig::l_offset_for_testing; nonzero values break
  // the scaled solver and must make the theorem1 suite fail.
  int l_offset_for_testing = 0;
};

struct VerifyFailure {
  std::string suite;
  std::string check;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  int trials = 0;
  int checks = 0;
  std::vector<VerifyFailure> failures;
  // Suite-specific counters, such as how many probes were differentiable.
  std::vector<std::pair<std::string, int>> counters;

  bool passed() const { return failures.empty() && checks > 0; }
};

// Seed of trial t.
std::uint64_t TrialSeed(std::uint64_t base, int trial);

// Random systems with n <= 10, m <= 8, d = 3: CadScaled at 1e-10 against the
// orthogonal oracle and CadRaw against the l-weighted oracle, to 1e-4.
VerifyReport VerifyTheorem1(const VerifyConfig& config);

// Two-set Dykstra on two-constraint systems and simultaneous Dykstra on
// systems with n <= 10, m <= 8, both against the oracle to 1e-4. Each trial
// runs one of each.
VerifyReport VerifyDykstra(const VerifyConfig& config);

// Surrogate and exact Jacobians: rank, exactness iff interior or a single
// active constraint, alignment, local step equivalence, agreement with finite
// differences, idempotence and symmetry, and the hypercube corner whose exact
// Jacobian is zero.
VerifyReport VerifyProp1(const VerifyConfig& config);

// Clipping: feasibility of sparse, standard and chained outputs from
// hit-and-run start points, alpha_p >= alpha_C, maximality of alpha_p, and the
// two-component witness (1, 0.5) vs (1, 0.25).
VerifyReport VerifySvc(const VerifyConfig& config);

// theorem1 | dykstra | prop1 | svc. Throws std::invalid_argument otherwise.
VerifyReport RunVerifySuite(std::string_view suite, const VerifyConfig& config);

// Hypercube [0, 1]^n with x = (2, ..., 2).
SparseConstraintSystem UnitHypercube(int n);

}  // namespace cadproj

#endif  // CADPROJ_VERIFY_H_
