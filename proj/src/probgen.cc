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

#include "cadproj/probgen.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cadproj {
namespace {

// Random streams of one instance.
enum Stream : std::uint64_t {
  kConstraintStream = 0,
  kObjectiveStream = 1,
  kTopologyStream = 2,
  kGeometryStream = 3,
};

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over base + golden-ratio multiple of the stream.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string ProblemInstance::id() const {
  return meta.family + "-n" + std::to_string(system.num_variables()) + "-m" +
         std::to_string(system.num_constraints()) + "-s" +
         std::to_string(meta.seed);
}

void GeneratorConfig::Validate() const {
  if (n < 1 || m < 1) throw std::invalid_argument("n and m must be >= 1");
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
}

GeneratedConstraints GenerateConstraints(const GeneratorConfig& config) {
  config.Validate();
  const int n = config.n;
  const int m = config.m;
  std::mt19937_64 rng(DeriveSeed(config.seed, kConstraintStream));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> pick_column(0, n - 1);

  // Pattern at degree d - 1, plus one extra nonzero per row so that no row is
  // empty; about d nonzeros per row on average.
  const double p = static_cast<double>(config.degree - 1) / n;
  std::vector<Triplet> triplets;
  std::vector<char> used(n);
  std::vector<int> pattern;
  for (int i = 0; i < m; ++i) {
    std::fill(used.begin(), used.end(), 0);
    pattern.clear();
    for (int j = 0; j < n; ++j) {
      if (unit(rng) < p) {
        used[j] = 1;
        pattern.push_back(j);
      }
    }
    if (static_cast<int>(pattern.size()) < n) {
      int j = pick_column(rng);
      while (used[j]) j = pick_column(rng);
      used[j] = 1;
      pattern.push_back(j);
    }
    std::sort(pattern.begin(), pattern.end());
    std::vector<double> values(pattern.size());
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (double& v : values) {
        v = normal(rng);
        norm_sq += v * v;
      }
    } while (norm_sq == 0.0);
    const double norm = std::sqrt(norm_sq);
    for (size_t k = 0; k < pattern.size(); ++k) {
      triplets.push_back({i, pattern[k], values[k] / norm});
    }
  }

  std::vector<double> witness(n);
  for (double& s : witness) s = normal(rng);
  SparseConstraintSystem shape(n, triplets, std::vector<double>(m, 0.0));
  const std::vector<double> as = shape.Multiply(witness);
  std::vector<double> rhs(m);
  if (config.offset) {
    std::uniform_real_distribution<double> offset(0.1, 1.0);
    for (int i = 0; i < m; ++i) rhs[i] = offset(rng) + as[i];
  } else {
    for (int i = 0; i < m; ++i) {
      rhs[i] = std::max(as[i], 0.1 * shape.row_norms()[i]);
    }
  }
  return {SparseConstraintSystem(n, std::move(triplets), std::move(rhs)),
          std::move(witness)};
}

namespace {

ProblemInstance FromConstraints(const GeneratorConfig& config,
                                std::string family) {
  GeneratedConstraints generated = GenerateConstraints(config);
  ProblemInstance instance;
  instance.system = std::move(generated.system);
  instance.meta = {config.seed, std::move(family), config.degree, config.delta,
                   std::move(generated.witness)};
  return instance;
}

std::vector<double> UniformVector(int n, double lo, double hi,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (double& v : out) v = dist(rng);
  return out;
}

}  // namespace

ProblemInstance GenerateLp(const GeneratorConfig& config) {
  ProblemInstance instance = FromConstraints(config, "lp");
  std::mt19937_64 rng(DeriveSeed(config.seed, kObjectiveStream));
  instance.objective = LinearObjective{UniformVector(config.n, -1.0, 1.0, rng)};
  return instance;
}

ProblemInstance GenerateConstraintsOnly(const GeneratorConfig& config) {
  return FromConstraints(config, "constraints-only");
}

std::vector<std::pair<int, int>> ErdosRenyiEdges(int n, double p,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (unit(rng) < p) edges.emplace_back(i, j);
    }
  }
  return edges;
}

std::vector<std::pair<int, int>> BarabasiAlbertEdges(int n, int attachments,
                                                     std::uint64_t seed) {
  if (attachments < 1) throw std::invalid_argument("attachments must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  // Every endpoint of every edge, so a uniform draw is degree-proportional.
  std::vector<int> endpoints;
  const int core = std::min(n, attachments + 1);
  for (int i = 0; i < core; ++i) {
    for (int j = i + 1; j < core; ++j) {
      edges.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  std::vector<int> targets;
  for (int v = core; v < n; ++v) {
    targets.clear();
    std::uniform_int_distribution<size_t> pick(0, endpoints.size() - 1);
    while (static_cast<int>(targets.size()) < attachments) {
      const int t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    std::sort(targets.begin(), targets.end());
    for (int t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

ProblemInstance GenerateQuadratic(const GeneratorConfig& config,
                                  Topology topology) {
  ProblemInstance instance = FromConstraints(
      config, topology == Topology::kErdosRenyi ? "quad-er" : "quad-ba");
  const int n = config.n;
  const std::uint64_t graph_seed = DeriveSeed(config.seed, kTopologyStream);
  const auto edges =
      topology == Topology::kErdosRenyi
          ? ErdosRenyiEdges(n, std::min(1.0, static_cast<double>(config.degree) / n),
                            graph_seed)
          : BarabasiAlbertEdges(
                n, std::max(1, static_cast<int>(std::lround(config.degree / 2.0))),
                graph_seed);
  std::mt19937_64 rng(DeriveSeed(config.seed, kObjectiveStream));
  QuadraticObjective objective;
  objective.topology = topology;
  objective.c = UniformVector(n, -1.0, 1.0, rng);
  std::uniform_real_distribution<double> weight(-10.0, 10.0);
  for (const auto& [i, j] : edges) {
    const double w = weight(rng);
    objective.q.push_back({i, j, w});
    objective.q.push_back({j, i, w});
  }
  instance.objective = std::move(objective);
  return instance;
}

std::vector<double> ChannelCapacities(const TransmitPowerObjective& objective,
                                      std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> signal(n, 0.0);
  std::vector<double> interference(n, objective.sigma * objective.sigma);
  for (const Triplet& h : objective.gains) {
    if (h.row == h.col) {
      signal[h.row] += h.value * x[h.col];
    } else {
      interference[h.row] += h.value * x[h.col];
    }
  }
  std::vector<double> capacity(n);
  for (int i = 0; i < n; ++i) {
    capacity[i] = std::log1p(signal[i] / interference[i]);
  }
  return capacity;
}

ProblemInstance GenerateTransmitPower(const GeneratorConfig& config,
                                      const TransmitPowerConfig& power) {
  config.Validate();
  if (!(power.sigma > 0.0) || !(power.p_max > 0.0)) {
    throw std::invalid_argument("sigma and p_max must be > 0");
  }
  const int n = config.n;
  std::mt19937_64 geometry(DeriveSeed(config.seed, kGeometryStream));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> px(n), py(n);
  for (int i = 0; i < n; ++i) {
    px[i] = unit(geometry);
    py[i] = unit(geometry);
  }
  // Expected degree of a unit-square geometric graph is about (n-1) pi r^2.
  const double radius =
      n > 1 ? std::min(std::sqrt(2.0),
                       std::sqrt(config.degree / ((n - 1) * std::numbers::pi)))
            : 1.0;

  TransmitPowerObjective objective;
  objective.sigma = power.sigma;
  objective.p_max = power.p_max;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double dist = std::hypot(px[i] - px[j], py[i] - py[j]);
      if (i != j && dist >= radius) continue;
      // Distances in units of the connection radius, so d_ij in [0, 1).
      const double scaled = i == j ? 0.0 : dist / radius;
      objective.gains.push_back({i, j, std::pow(scaled + 1.0, -3.0)});
    }
  }

  std::mt19937_64 rng(DeriveSeed(config.seed, kObjectiveStream));
  const std::vector<double> witness =
      UniformVector(n, std::min(0.1, power.p_max), power.p_max, rng);
  const std::vector<double> capacity = ChannelCapacities(objective, witness);
  objective.requirements.resize(n);
  for (int i = 0; i < n; ++i) objective.requirements[i] = 0.5 * capacity[i];

  // c_i >= s_i  <=>  (e^{s_i} - 1) sum_{j != i} H_ij x_j - H_ii x_i
  //                      <= -(e^{s_i} - 1) sigma^2.
  std::vector<Triplet> triplets;
  std::vector<double> rhs(3 * n);
  const double noise = power.sigma * power.sigma;
  for (const Triplet& h : objective.gains) {
    const double factor = std::expm1(objective.requirements[h.row]);
    triplets.push_back(
        {h.row, h.col, h.row == h.col ? -h.value : factor * h.value});
  }
  for (int i = 0; i < n; ++i) {
    rhs[i] = -std::expm1(objective.requirements[i]) * noise;
    triplets.push_back({n + i, i, 1.0});
    rhs[n + i] = power.p_max;
    triplets.push_back({2 * n + i, i, -1.0});
    rhs[2 * n + i] = 0.0;
  }

  ProblemInstance instance;
  instance.system = SparseConstraintSystem(n, std::move(triplets), std::move(rhs));
  instance.objective = std::move(objective);
  instance.meta = {config.seed, "power", config.degree, config.delta, witness};
  return instance;
}

std::vector<double> GenerateInitialPoint(int n, double delta,
                                         std::uint64_t seed) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  if (delta == 0.0) return std::vector<double>(n, 0.0);
  std::mt19937_64 rng(seed);
  return UniformVector(n, -delta, delta, rng);
}

ProblemInstance GenerateFamily(std::string_view family,
                               const GeneratorConfig& config) {
  if (family == "lp") return GenerateLp(config);
  if (family == "quad-er") return GenerateQuadratic(config, Topology::kErdosRenyi);
  if (family == "quad-ba") {
    return GenerateQuadratic(config, Topology::kBarabasiAlbert);
  }
  if (family == "power") return GenerateTransmitPower(config);
  if (family == "constraints-only") return GenerateConstraintsOnly(config);
  throw std::invalid_argument("unknown family '" + std::string(family) + "'");
}

}  // namespace cadproj
