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

#include "cadproj/instance_io.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cadproj {
namespace {

using nlohmann::json;

json TripletsToJson(const std::vector<Triplet>& triplets) {
  json out = json::array();
  for (const Triplet& t : triplets) out.push_back({t.row, t.col, t.value});
  return out;
}

std::vector<Triplet> TripletsFromJson(const json& array) {
  std::vector<Triplet> out;
  for (const json& t : array) {
    if (!t.is_array() || t.size() != 3) {
      throw std::invalid_argument("triplet must be [i, j, value]");
    }
    out.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<double>()});
  }
  return out;
}

json ObjectiveToJson(const Objective& objective) {
  struct Visitor {
    json operator()(std::monostate) const { return {{"kind", "none"}}; }
    json operator()(const LinearObjective& o) const {
      return {{"kind", "linear"}, {"c", o.c}};
    }
    json operator()(const QuadraticObjective& o) const {
      return {{"kind", "quadratic"},
              {"c", o.c},
              {"q_triplets", TripletsToJson(o.q)},
              {"topology", o.topology == Topology::kErdosRenyi ? "er" : "ba"}};
    }
    json operator()(const TransmitPowerObjective& o) const {
      return {{"kind", "transmit_power"},
              {"h_triplets", TripletsToJson(o.gains)},
              {"sigma", o.sigma},
              {"s", o.requirements},
              {"p_max", o.p_max}};
    }
  };
  return std::visit(Visitor{}, objective);
}

std::vector<double> VectorOfLength(const json& j, int n, const char* name) {
  std::vector<double> v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != n) {
    throw std::invalid_argument(std::string(name) + " has " +
                                std::to_string(v.size()) +
                                " entries, expected n = " + std::to_string(n));
  }
  return v;
}

std::vector<Triplet> SquareTriplets(const json& j, int n, const char* name) {
  std::vector<Triplet> t = TripletsFromJson(j);
  for (const Triplet& e : t) {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) {
      throw std::invalid_argument(std::string(name) + " index out of range");
    }
  }
  return t;
}

Objective ObjectiveFromJson(const json& j, int n) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return std::monostate{};
  if (kind == "linear") {
    return LinearObjective{VectorOfLength(j.at("c"), n, "c")};
  }
  if (kind == "quadratic") {
    QuadraticObjective o;
    o.c = VectorOfLength(j.at("c"), n, "c");
    o.q = SquareTriplets(j.at("q_triplets"), n, "q_triplets");
    const std::string topology = j.value("topology", "er");
    if (topology != "er" && topology != "ba") {
      throw std::invalid_argument("unknown topology '" + topology + "'");
    }
    o.topology = topology == "er" ? Topology::kErdosRenyi
                                  : Topology::kBarabasiAlbert;
    return o;
  }
  if (kind == "transmit_power") {
    TransmitPowerObjective o;
    o.gains = SquareTriplets(j.at("h_triplets"), n, "h_triplets");
    o.sigma = j.at("sigma").get<double>();
    o.requirements = VectorOfLength(j.at("s"), n, "s");
    o.p_max = j.at("p_max").get<double>();
    return o;
  }
  throw std::invalid_argument("unknown objective kind '" + kind + "'");
}

}  // namespace

std::string InstanceToJson(const ProblemInstance& instance) {
  const SparseConstraintSystem& s = instance.system;
  json doc;
  doc["n"] = s.num_variables();
  doc["m"] = s.num_constraints();
  doc["triplets"] = TripletsToJson(s.triplets());
  doc["b"] = std::vector<double>(s.rhs().begin(), s.rhs().end());
  doc["objective"] = ObjectiveToJson(instance.objective);
  doc["meta"] = {{"seed", instance.meta.seed},
                 {"family", instance.meta.family},
                 {"d", instance.meta.degree},
                 {"delta", instance.meta.delta},
                 {"witness", instance.meta.witness}};
  return doc.dump();
}

ProblemInstance InstanceFromJson(const std::string& text) {
  try {
    const json doc = json::parse(text);
    const int n = doc.at("n").get<int>();
    const int m = doc.at("m").get<int>();
    std::vector<double> b = doc.at("b").get<std::vector<double>>();
    if (static_cast<int>(b.size()) != m) {
      throw std::invalid_argument("b has " + std::to_string(b.size()) +
                                  " entries, expected m = " + std::to_string(m));
    }
    ProblemInstance instance;
    instance.system =
        SparseConstraintSystem(n, TripletsFromJson(doc.at("triplets")), std::move(b));
    if (doc.contains("objective")) {
      instance.objective = ObjectiveFromJson(doc.at("objective"), n);
    }
    if (doc.contains("meta")) {
      const json& meta = doc.at("meta");
      instance.meta.seed = meta.value("seed", std::uint64_t{0});
      instance.meta.family = meta.value("family", std::string());
      instance.meta.degree = meta.value("d", 0);
      instance.meta.delta = meta.value("delta", 0.0);
      instance.meta.witness =
          meta.value("witness", std::vector<double>());
    }
    return instance;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw std::invalid_argument(std::string("malformed instance: ") + e.what());
  }
}

void WriteInstance(const ProblemInstance& instance,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << InstanceToJson(instance) << '\n';
}

ProblemInstance ReadInstance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return InstanceFromJson(buffer.str());
}

}  // namespace cadproj
