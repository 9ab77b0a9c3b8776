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

// Seeded random test problems: sparse constraints, LP / quadratic / transmit
// power objectives and uniformly sampled starting points. Every generator
// owns a std::mt19937_64 seeded from its config, so equal inputs give equal
// outputs bit for bit.

#ifndef CADPROJ_PROBGEN_H_
#define CADPROJ_PROBGEN_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cadproj/constraint_system.h"

namespace cadproj {

enum class Topology { kErdosRenyi, kBarabasiAlbert };

struct LinearObjective {
  std::vector<double> c;
};

// x^T Q x + c^T x. `q` lists both (i, j) and (j, i) for off-diagonal pairs.
struct QuadraticObjective {
  std::vector<double> c;
  std::vector<Triplet> q;
  Topology topology = Topology::kErdosRenyi;
};

// (1/n) sum_i log(1 + H_ii x_i / (sum_{j != i} H_ij x_j + sigma^2)).
struct TransmitPowerObjective {
  std::vector<Triplet> gains;  // H, diagonal included
  double sigma = 0.1;
  std::vector<double> requirements;  // s_i
  double p_max = 1.0;
};

using Objective = std::variant<std::monostate, LinearObjective,
                               QuadraticObjective, TransmitPowerObjective>;

struct InstanceMeta {
  std::uint64_t seed = 0;
  std::string family;
  int degree = 0;
  double delta = 0.0;
  // A feasible point known by construction (s for random constraints, the
  // witness power vector for transmit power).
  std::vector<double> witness;
};

struct ProblemInstance {
  SparseConstraintSystem system;
  Objective objective;
  InstanceMeta meta;

  // "<family>-n<n>-m<m>-s<seed>".
  std::string id() const;
};

struct GeneratorConfig {
  int n = 10;
  int m = 8;
  int degree = 3;
  double delta = 1.0;
  // b = u + A s with u ~ U(0.1, 1). Without the offset, b = max(A s, 0.1) row
  // by row so that the origin-centred 0.1-ball is feasible.
  bool offset = true;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument unless n, m >= 1, degree >= 1, delta >= 0.
  void Validate() const;
};

struct GeneratedConstraints {
  SparseConstraintSystem system;
  std::vector<double> witness;  // s
};

GeneratedConstraints GenerateConstraints(const GeneratorConfig& config);

ProblemInstance GenerateLp(const GeneratorConfig& config);
ProblemInstance GenerateQuadratic(const GeneratorConfig& config,
                                  Topology topology);
ProblemInstance GenerateConstraintsOnly(const GeneratorConfig& config);

struct TransmitPowerConfig {
  double sigma = 0.1;
  double p_max = 1.0;
};

// n transmitters, 3n constraints: one linearised capacity requirement per
// transmitter followed by the box rows x_i <= p_max and -x_i <= 0.
ProblemInstance GenerateTransmitPower(const GeneratorConfig& config,
                                      const TransmitPowerConfig& power = {});

// x_i ~ U(-delta, delta).
std::vector<double> GenerateInitialPoint(int n, double delta,
                                         std::uint64_t seed);

// Dispatch on family name: lp, quad-er, quad-ba, power, constraints-only.
ProblemInstance GenerateFamily(std::string_view family,
                               const GeneratorConfig& config);

// Undirected random graphs as sorted edge lists (i < j).
std::vector<std::pair<int, int>> ErdosRenyiEdges(int n, double p,
                                                 std::uint64_t seed);
std::vector<std::pair<int, int>> BarabasiAlbertEdges(int n, int attachments,
                                                     std::uint64_t seed);

// Mixes a base seed with a stream index into an independent seed.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream);

// Per-transmitter channel capacities c_i(x).
std::vector<double> ChannelCapacities(const TransmitPowerObjective& objective,
                                      std::span<const double> x);

}  // namespace cadproj

#endif  // CADPROJ_PROBGEN_H_
