// Copyright 2026 The CFO Planner Authors.
//
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

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cfo {

// Units are fixed across the library: time in hours, energy in kWh,
// intensity in kg/kWh, footprint in kg.
using Hours = double;
using Kwh = double;
using Kg = double;

using NodeIndex = int;
using EdgeIndex = int;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Absolute tolerance for comparisons in hours, kWh and kg.
inline constexpr double kTol = 1e-9;

enum class ErrorKind {
  kOutOfDomain,
  kInvariant,
  kArgument,
  kStructural,
  kValidation,
  kNoPath,
  kInternal,
  kParse,
  kRefused,
};

const char* ToString(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ToString(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// floor/ceil of a ratio that should be integral up to rounding noise, e.g.
// 60 / 0.1 evaluates to 600.0000000000001 and must ceil to 600.
inline long long StableFloor(double x) {
  return static_cast<long long>(std::floor(x + 1e-9 * std::max(1.0, std::fabs(x))));
}
inline long long StableCeil(double x) {
  return static_cast<long long>(std::ceil(x - 1e-9 * std::max(1.0, std::fabs(x))));
}

}  // namespace cfo
