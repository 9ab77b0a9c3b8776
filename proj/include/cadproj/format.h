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

// Text formatting shared by the CSV and JSON writers.

#ifndef CADPROJ_FORMAT_H_
#define CADPROJ_FORMAT_H_

#include <charconv>
#include <string>

namespace cadproj {

// Shortest decimal form that parses back to the same double.
inline std::string FormatDouble(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace cadproj

#endif  // CADPROJ_FORMAT_H_
