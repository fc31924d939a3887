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

// Seeded synthetic instances.

#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "cfo/model.h"

namespace cfo {

// Deterministic across platforms: draws come from std::mt19937_64, whose
// output sequence is fixed by the standard, mapped to ranges by hand.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }
  // Uniform integer in [lo, hi].
  int Int(int lo, int hi);
  // Uniform real in [lo, hi).
  double Real(double lo, double hi);
  bool Coin(double p) { return Real(0.0, 1.0) < p; }

 private:
  std::mt19937_64 engine_;
};

enum class Profile { kLine, kGrid, kCorridor };

const char* ToString(Profile profile);
// Throws kArgument for unknown names.
Profile ParseProfile(const std::string& name);

struct GenOptions {
  uint64_t seed = 1;
  Profile profile = Profile::kLine;
  // Emit instances the exhaustive oracle solves exactly.
  bool aligned = false;
  // Node count for line and grid profiles; 0 picks one from the seed.
  int nodes = 0;
  // Station count; -1 picks one from the seed.
  int stations = -1;
  // Edge budget for aligned instances.
  int max_edges = 9;
};

// Throws kArgument for sizes outside the profile's limits.
Instance generate_instance(const GenOptions& options);

// Energy step of aligned instances; charge amounts in the oracle are
// multiples of it.
inline constexpr Kwh kAlignedChargeStep = 10.0;

}  // namespace cfo
