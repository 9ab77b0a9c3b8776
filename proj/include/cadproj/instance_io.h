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

// JSON instance files:
//
//   {"n": 3, "m": 2,
//    "triplets": [[0, 0, 1.0], [1, 2, -0.5]],   // 0-based [i, j, value]
//    "b": [1.0, 0.0],
//    "objective": {"kind": "linear", "c": [...]},
//    "meta": {"seed": 7, "family": "lp", "d": 3, "delta": 1.0,
//             "witness": [...]}}
//
// objective.kind is one of none, linear, quadratic, transmit_power; the other
// keys are c, q_triplets, topology (er | ba), h_triplets, sigma, s, p_max.
// Doubles are written in shortest round-trip form, so read(write(x)) == x.

#ifndef CADPROJ_INSTANCE_IO_H_
#define CADPROJ_INSTANCE_IO_H_

#include <filesystem>
#include <string>

#include "cadproj/probgen.h"

namespace cadproj {

std::string InstanceToJson(const ProblemInstance& instance);
// Throws std::invalid_argument on malformed documents.
ProblemInstance InstanceFromJson(const std::string& text);

void WriteInstance(const ProblemInstance& instance,
                   const std::filesystem::path& path);
ProblemInstance ReadInstance(const std::filesystem::path& path);

}  // namespace cadproj

#endif  // CADPROJ_INSTANCE_IO_H_
